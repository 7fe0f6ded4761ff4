"""Assemble the handlebody complex from a tree family and check its structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .simplicial import (
    ComplexStructureError,
    FacetComplex,
    boundary_complex,
    is_closed,
    skeleton,
)
from .spiderweb import (
    Deck,
    Params,
    SpiderwebGraph,
    build_trees,
    make_graph,
)


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class HandleComplex:
    complex: FacetComplex
    params: Params
    m: tuple
    deck: Deck
    # graph vertex -> facet, in graph-vertex order
    facet_of: tuple = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.params.n

    def provenance(self) -> list:
        lines = [f"d={self.params.d} k={self.params.k} n={self.n}",
                 "m=" + " ".join(map(str, self.m))]
        for i in range(self.params.k, 0, -1):
            p = self.deck[i - 1]
            lines.append(f"sigma_{i}={p.sigma} tau_{i}={p.tau}")
        return lines


def build_complex(graph: SpiderwebGraph, trees, deck: Deck = (), mirror: bool = True) -> HandleComplex:
    """Facets u^ = {j : u in tree j} for every graph vertex u.

    With ``mirror`` (the default) tree j contributes the vertex label ``-j mod n``
    instead of ``j``.  Both labelings give isomorphic complexes; the mirrored one
    reproduces the published orbit representatives verbatim.  ``deck`` is only
    recorded as provenance.
    """
    params = graph.params
    d, n = params.d, params.n
    members = [[] for _ in range(graph.n_vertices)]
    for tree in trees:
        label = -tree.root % n if mirror else tree.root
        for u in tree.vertices:
            members[u].append(label)
    facets = []
    for u, js in enumerate(members):
        if len(js) != d + 2:
            raise ConstructionError(
                f"graph vertex {graph.split(u)} lies in {len(js)} trees, expected {d + 2} (vertex cover count)")
        facets.append(tuple(sorted(js)))
    tree_edges: dict = {}
    for tree in trees:
        for e in tree.edges:
            tree_edges[e] = tree_edges.get(e, 0) + 1
    for e in graph.edges:
        if tree_edges.get(e, 0) != d + 1:
            a, b = e
            raise ConstructionError(
                f"graph edge {graph.split(a)}-{graph.split(b)} lies in {tree_edges.get(e, 0)} trees, "
                f"expected {d + 1} (edge cover count)")
    if len(set(facets)) != len(facets):
        raise ConstructionError("two graph vertices produced the same facet")
    X = FacetComplex(d + 1, n, tuple(sorted(facets)))
    return HandleComplex(X, params, tuple(graph.m), tuple(deck), tuple(facets))


def build_from_deck(params: Params, m, deck: Deck, mirror: bool = True) -> tuple:
    """Build graph, trees and complex; returns ``(graph, trees, K)``."""
    graph = make_graph(params, m)
    trees = build_trees(deck, graph.m, graph)
    return graph, trees, build_complex(graph, trees, deck, mirror=mirror)


def rotate_facet(f, j: int, n: int) -> tuple:
    return tuple(sorted((v + j) % n for v in f))


def orbit_min(f, n: int) -> tuple:
    return min(rotate_facet(f, -v, n) for v in f)


def check_transitivity(X: FacetComplex, n: int | None = None) -> bool:
    """Whether ``i -> i + 1 (mod n)`` maps the facet set onto itself."""
    n = X.n_vertices if n is None else n
    fs = set(X.facets)
    return all(rotate_facet(f, 1, n) in fs for f in fs)


def orbit_representatives(X, n: int | None = None) -> list:
    """Lexicographically least facet of each rotation orbit, sorted."""
    if isinstance(X, HandleComplex):
        n = X.n if n is None else n
        X = X.complex
    n = X.n_vertices if n is None else n
    if not check_transitivity(X, n):
        raise ComplexStructureError(f"facet set is not invariant under the Z_{n} rotation")
    reps = sorted({orbit_min(f, n) for f in X.facets})
    if len(reps) * n != len(X.facets):
        raise ComplexStructureError("rotation does not act freely on the facets")
    return reps


def expand_orbits(reps, n: int) -> FacetComplex:
    """Full facet set generated by rotating the representatives."""
    return FacetComplex.from_facets(
        (rotate_facet(f, j, n) for f in reps for j in range(n)), n_vertices=n)


@dataclass
class BoundaryReport:
    closed: bool
    n_vertices: int
    expected_vertices: int
    skeleton_match: bool

    @property
    def ok(self) -> bool:
        return self.closed and self.n_vertices == self.expected_vertices and self.skeleton_match


def boundary_of(K, check: bool = True):
    """Boundary complex and its structural report.

    The report checks that the boundary is closed, uses every vertex and shares
    the codimension-2 skeleton with K (all interior faces have dimension >= dim K - 1).
    """
    X = K.complex if isinstance(K, HandleComplex) else K
    B = boundary_complex(X)
    closed = bool(B.facets) and (B.dim == 0 or is_closed(B))
    if B.dim == 0:
        closed = bool(B.facets)
    D = X.dim
    match = True
    if D >= 2:
        match = skeleton(X, D - 2) == skeleton(B, D - 2)
    rep = BoundaryReport(closed, len(B.vertices), len(X.vertices), match)
    if check and not rep.ok:
        raise ComplexStructureError(f"boundary report failed: {rep}")
    return B, rep


def check_dual_graph(K: HandleComplex, graph: SpiderwebGraph) -> dict:
    """Verify that ``u -> u^`` is an isomorphism from the graph to the dual graph.

    Returns the map from graph vertices to facets.
    """
    d = graph.params.d
    facet_of = K.facet_of
    if len(facet_of) != graph.n_vertices or len(set(facet_of)) != len(facet_of):
        raise ComplexStructureError("u -> u^ is not a bijection onto the facets")
    owner = {f: u for u, f in enumerate(facet_of)}
    ridge_owner: dict = {}
    dual_edges = set()
    for f in K.complex.facets:
        for r in combinations(f, d + 1):
            other = ridge_owner.setdefault(r, f)
            if other is not f:
                a, b = owner[other], owner[f]
                dual_edges.add((min(a, b), max(a, b)))
    if len(dual_edges) != len(graph.edges):
        raise ComplexStructureError(
            f"dual graph has {len(dual_edges)} edges, spiderweb graph has {len(graph.edges)}")
    if dual_edges != set(graph.edges):
        raise ComplexStructureError("u -> u^ does not map graph edges onto dual-graph edges")
    return {u: facet_of[u] for u in range(graph.n_vertices)}
