"""Pure simplicial complexes stored as facet lists.

A face is a strictly increasing tuple of non-negative vertex ids.  A
:class:`FacetComplex` is immutable; every operation below returns new data.
"""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

Face = tuple  # strictly increasing tuple of ints


class ComplexStructureError(ValueError):
    """The complex does not have the structure an operation requires."""


class ComplexParseError(ValueError):
    """Malformed ``.fct`` input."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def make_face(vertices: Iterable[int]) -> Face:
    face = tuple(sorted(vertices))
    if any(v < 0 for v in face):
        raise ValueError(f"negative vertex in {face}")
    if len(set(face)) != len(face):
        raise ValueError(f"repeated vertex in {face}")
    return face


@dataclass(frozen=True)
class FacetComplex:
    """A pure complex given by its facets, all of dimension ``dim``.

    ``n_vertices`` is the size of the label range ``0..n_vertices-1``; not every
    label has to be used (links and induced pieces keep the ambient labels).
    """

    dim: int
    n_vertices: int
    facets: tuple

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dim must be >= 0")
        for f in self.facets:
            if len(f) != self.dim + 1:
                raise ValueError(f"facet {f} does not have dimension {self.dim}")
            if f and f[-1] >= self.n_vertices:
                raise ValueError(f"facet {f} uses a vertex >= {self.n_vertices}")
            if any(a >= b for a, b in zip(f, f[1:])):
                raise ValueError(f"facet {f} is not strictly increasing")

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]], n_vertices: int | None = None,
                    dim: int | None = None) -> "FacetComplex":
        fs = sorted({make_face(f) for f in facets})
        if dim is None:
            if not fs:
                raise ValueError("dim is required for an empty complex")
            dim = len(fs[0]) - 1
        if n_vertices is None:
            n_vertices = max((f[-1] for f in fs), default=0) + 1
        return cls(dim, n_vertices, tuple(fs))

    def __len__(self) -> int:
        return len(self.facets)

    def __iter__(self):
        return iter(self.facets)

    @property
    def vertices(self) -> tuple:
        return tuple(sorted({v for f in self.facets for v in f}))

    def relabel(self, mapping) -> "FacetComplex":
        """Apply a vertex map given as a dict or a sequence indexed by vertex."""
        images = [mapping[v] for v in self.vertices]
        n = max(self.n_vertices, max(images, default=-1) + 1)
        return FacetComplex.from_facets(
            (tuple(mapping[v] for v in f) for f in self.facets), n_vertices=n, dim=self.dim)

    def is_empty(self) -> bool:
        return not self.facets


def simplex(vertices: Sequence[int]) -> FacetComplex:
    return FacetComplex.from_facets([vertices])


def simplex_boundary(vertices: Sequence[int]) -> FacetComplex:
    """The boundary of the simplex on ``vertices``."""
    vs = sorted(vertices)
    return FacetComplex.from_facets(combinations(vs, len(vs) - 1))


def skeleton(X: FacetComplex, i: int) -> set:
    if not 0 <= i <= X.dim:
        raise ValueError(f"skeleton index {i} outside 0..{X.dim}")
    return {face for f in X.facets for face in combinations(f, i + 1)}


def faces_by_dim(X: FacetComplex) -> list:
    """Sorted face lists for every dimension 0..dim."""
    return [sorted(skeleton(X, i)) for i in range(X.dim + 1)] if X.facets else []


def f_vector(X: FacetComplex) -> tuple:
    return tuple(len(skeleton(X, i)) for i in range(X.dim + 1)) if X.facets else ()


def euler_characteristic(X: FacetComplex) -> int:
    return sum((-1) ** i * f for i, f in enumerate(f_vector(X)))


def maximal_faces(faces: Iterable[Face]) -> tuple:
    """Drop faces contained in other faces of the collection."""
    ordered = sorted(set(faces), key=len, reverse=True)
    kept: list = []
    for face in ordered:
        s = set(face)
        if not any(s <= set(k) for k in kept if len(k) > len(face)):
            kept.append(face)
    return tuple(sorted(kept))


def induced_subcomplex(X: FacetComplex, W: Iterable[int]) -> tuple:
    """Maximal faces of ``X[W]``; the result need not be pure."""
    w = set(W)
    pieces = {tuple(v for v in f if v in w) for f in X.facets}
    pieces.discard(())
    return maximal_faces(pieces)


def link(X: FacetComplex, v: int) -> FacetComplex:
    facets = [tuple(u for u in f if u != v) for f in X.facets if v in f]
    if not facets:
        raise ValueError(f"vertex {v} is not used by the complex")
    return FacetComplex(X.dim - 1, X.n_vertices, tuple(sorted(facets)))


def star(X: FacetComplex, v: int) -> FacetComplex:
    return FacetComplex(X.dim, X.n_vertices, tuple(f for f in X.facets if v in f))


def ridge_incidence(X: FacetComplex) -> dict:
    """Map each (dim-1)-face to the indices of the facets containing it."""
    inc = defaultdict(list)
    for idx, f in enumerate(X.facets):
        for r in combinations(f, X.dim):
            inc[r].append(idx)
    return inc


@dataclass(frozen=True)
class Graph:
    n_nodes: int
    edges: frozenset

    def adjacency(self) -> list:
        adj = [[] for _ in range(self.n_nodes)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def degree(self, node: int) -> int:
        return sum(1 for e in self.edges if node in e)

    def is_connected(self) -> bool:
        if self.n_nodes == 0:
            return True
        adj = self.adjacency()
        seen = {0}
        todo = [0]
        while todo:
            for b in adj[todo.pop()]:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return len(seen) == self.n_nodes

    def is_tree(self) -> bool:
        return len(self.edges) == self.n_nodes - 1 and self.is_connected()


def dual_graph(X: FacetComplex) -> Graph:
    edges = set()
    if X.dim == 0:
        return Graph(len(X.facets), frozenset())
    for idxs in ridge_incidence(X).values():
        for a, b in combinations(idxs, 2):
            edges.add((a, b) if a < b else (b, a))
    return Graph(len(X.facets), frozenset(edges))


def is_weak_pseudomanifold(X: FacetComplex) -> bool:
    if X.dim == 0:
        return len(X.facets) <= 2
    return all(len(idxs) <= 2 for idxs in ridge_incidence(X).values())


def is_pseudomanifold(X: FacetComplex) -> bool:
    return is_weak_pseudomanifold(X) and dual_graph(X).is_connected()


def boundary_complex(X: FacetComplex) -> FacetComplex:
    if not is_weak_pseudomanifold(X):
        raise ComplexStructureError("not a weak pseudomanifold: some ridge lies in 3 or more facets")
    if X.dim == 0:
        # the boundary of a 0-dimensional weak pseudomanifold is empty by convention
        return FacetComplex(0, X.n_vertices, ())
    ridges = sorted(r for r, idxs in ridge_incidence(X).items() if len(idxs) == 1)
    return FacetComplex(X.dim - 1, X.n_vertices, tuple(ridges))


def is_closed(X: FacetComplex) -> bool:
    return X.dim > 0 and all(len(idxs) == 2 for idxs in ridge_incidence(X).values())


def is_connected(X: FacetComplex) -> bool:
    """Connectivity of the underlying space (through shared vertices)."""
    verts = X.vertices
    if not verts:
        return False
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for f in X.facets:
        r = find(f[0])
        for v in f[1:]:
            parent[find(v)] = r
    return len({find(v) for v in verts}) == 1


def is_k_neighbourly(X: FacetComplex, k: int) -> bool:
    if not 1 <= k <= X.dim + 1:
        raise ValueError(f"k={k} outside 1..{X.dim + 1}")
    return len(skeleton(X, k - 1)) == comb(len(X.vertices), k)


def components(X: FacetComplex) -> list:
    """Vertex sets of the connected components."""
    adj = defaultdict(set)
    for f in X.facets:
        for v in f:
            adj[v].update(f)
    seen: set = set()
    out = []
    for v in X.vertices:
        if v in seen:
            continue
        comp = {v}
        q = deque([v])
        while q:
            for u in adj[q.popleft()]:
                if u not in comp:
                    comp.add(u)
                    q.append(u)
        seen |= comp
        out.append(sorted(comp))
    return out


def vertex_degrees(X: FacetComplex) -> Counter:
    return Counter(v for f in X.facets for v in f)


# ---------------------------------------------------------------------------
# .fct text format


def format_fct(X: FacetComplex, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"dim {X.dim}")
    lines.append(f"vertices {X.n_vertices}")
    lines.extend("facet " + " ".join(map(str, f)) for f in sorted(X.facets))
    return "\n".join(lines) + "\n"


def write_fct(path, X: FacetComplex, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_fct(X, comments))


def parse_fct(text: str) -> FacetComplex:
    dim = n = None
    facets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        try:
            vals = [int(t) for t in rest]
        except ValueError:
            raise ComplexParseError(f"non-integer value in {raw.strip()!r}", lineno) from None
        if key == "dim":
            if dim is not None or len(vals) != 1 or vals[0] < 0:
                raise ComplexParseError("bad or repeated 'dim' header", lineno)
            dim = vals[0]
        elif key == "vertices":
            if dim is None or n is not None or len(vals) != 1 or vals[0] < 1:
                raise ComplexParseError("'vertices' must follow 'dim' and be >= 1", lineno)
            n = vals[0]
        elif key == "facet":
            if n is None:
                raise ComplexParseError("facet before 'dim'/'vertices' headers", lineno)
            if len(vals) != dim + 1:
                raise ComplexParseError(f"facet has {len(vals)} vertices, expected {dim + 1}", lineno)
            if any(a >= b for a, b in zip(vals, vals[1:])) or vals[0] < 0 or vals[-1] >= n:
                raise ComplexParseError("facet vertices must be ascending and within range", lineno)
            facets.append(tuple(vals))
        else:
            raise ComplexParseError(f"unknown keyword {key!r}", lineno)
    if dim is None or n is None:
        raise ComplexParseError("missing 'dim' or 'vertices' header")
    used = {v for f in facets for v in f}
    if used != set(range(n)):
        missing = sorted(set(range(n)) - used)
        raise ComplexParseError(f"vertex labels must be contiguous 0..{n - 1}; unused: {missing[:10]}")
    return FacetComplex(dim, n, tuple(sorted(set(facets))))


def read_fct(path) -> FacetComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_fct(fh.read())
