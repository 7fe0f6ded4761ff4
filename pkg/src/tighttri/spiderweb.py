"""Spiderweb graphs, permutation decks and the induced trees built from them.

Graph vertex ``v_r(l)`` (ring ``r``, angle ``l`` in Z_n) is encoded as the
integer ``r * n + l``, so the rotation ``l -> l + 1`` acts ring by ring.
Permutations of ``{0..d}`` are value tuples ``(s(0), ..., s(d))``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from math import comb, gcd
from typing import Sequence


class DeckError(ValueError):
    """Invalid parameters, m-vector or permutation data."""


class TreetypeDecodeError(ValueError):
    pass


class TreeConstructionError(RuntimeError):
    """A tree violated one of the structural guarantees of the construction."""


def vertex_count(d: int, k: int) -> int:
    return (d + 1) * ((d + 2) * k + 2) + 1


@dataclass(frozen=True)
class Params:
    d: int
    k: int

    def __post_init__(self):
        if self.d < 1 or self.k < 0:
            raise DeckError(f"need d >= 1 and k >= 0, got d={self.d}, k={self.k}")

    @property
    def n(self) -> int:
        return vertex_count(self.d, self.k)

    @property
    def rings(self) -> int:
        return (self.d + 1) * self.k + 1


def admissible_step(x: int, d: int, n: int) -> bool:
    """Whether ``{+-l x : 1 <= l <= d+1}`` are 2(d+1) distinct nonzero residues.

    This is all the tree construction needs from a step size; every unit
    mod n qualifies, and some non-units do as well.
    """
    mult = multiples(x, d, n)
    return len(mult) == 2 * (d + 1) and 0 not in mult


def check_m_vector(m: Sequence[int], params: Params, units_only: bool = False) -> tuple:
    n, d = params.n, params.d
    m = tuple(x % n for x in m)
    if len(m) != params.k + 1:
        raise DeckError(f"m-vector needs {params.k + 1} entries, got {len(m)}")
    for x in m:
        if units_only and gcd(x, n) != 1:
            raise DeckError(f"m entry {x} is not invertible mod {n}")
        if not admissible_step(x, d, n):
            raise DeckError(f"m entry {x} has colliding multiples mod {n}")
    if len(set(m)) != len(m):
        raise DeckError(f"m entries must be distinct: {m}")
    return m


def multiples(mi: int, d: int, n: int, start: int = 1) -> set:
    return {(s * l * mi) % n for l in range(start, d + 2) for s in (1, -1)}


# ---------------------------------------------------------------------------
# the graph


@dataclass(frozen=True)
class SpiderwebGraph:
    params: Params
    m: tuple
    edges: frozenset
    adjacency: tuple = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def n_vertices(self) -> int:
        return self.n * self.params.rings

    def vertex(self, ring: int, angle: int) -> int:
        return ring * self.n + angle % self.n

    def split(self, u: int) -> tuple:
        return divmod(u, self.n)

    def rotate(self, u: int, j: int = 1) -> int:
        r, l = divmod(u, self.n)
        return r * self.n + (l + j) % self.n

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def orbit_cycle(self, i: int) -> list:
        """The vertices of C_i in cycle order."""
        d, n = self.params.d, self.n
        return [self.vertex((d + 1) * i, t * self.m[i]) for t in range(n)]

    def radial_path(self, j: int) -> list:
        return [self.vertex(r, j) for r in range(self.params.rings)]


def make_graph(params: Params, m: Sequence[int]) -> SpiderwebGraph:
    m = check_m_vector(m, params)
    d, n = params.d, params.n
    edges = set()
    for i, mi in enumerate(m):
        r = (d + 1) * i
        for l in range(n):
            a, b = r * n + l, r * n + (l + mi) % n
            edges.add((min(a, b), max(a, b)))
    for l in range(n):
        for r in range(params.rings - 1):
            edges.add((r * n + l, (r + 1) * n + l))
    adj = [[] for _ in range(n * params.rings)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return SpiderwebGraph(params, m, frozenset(edges), tuple(tuple(sorted(x)) for x in adj))


# ---------------------------------------------------------------------------
# permutations, treetypes


def check_permutation(p: Sequence[int], d: int) -> tuple:
    p = tuple(p)
    if sorted(p) != list(range(d + 1)):
        raise DeckError(f"{p} is not a permutation of 0..{d}")
    return p


@dataclass(frozen=True)
class PermutationPair:
    sigma: tuple
    tau: tuple

    def __post_init__(self):
        if len(self.sigma) != len(self.tau):
            raise DeckError("sigma and tau must permute the same set")
        check_permutation(self.sigma, len(self.sigma) - 1)
        check_permutation(self.tau, len(self.tau) - 1)

    @property
    def d(self) -> int:
        return len(self.sigma) - 1

    @property
    def type(self) -> tuple:
        return self.sigma.index(0), self.tau.index(0)


Deck = tuple  # of PermutationPair, entry i-1 holds (sigma_i, tau_i)


def make_deck(pairs) -> Deck:
    deck = tuple(p if isinstance(p, PermutationPair) else PermutationPair(tuple(p[0]), tuple(p[1]))
                 for p in pairs)
    if len({p.d for p in deck}) > 1:
        raise DeckError("deck entries permute sets of different sizes")
    return deck


def treetype(sigma: Sequence[int], tau: Sequence[int]) -> frozenset:
    d = len(sigma) - 1
    return frozenset((p + 1, q + 1) for p in range(d + 1) for q in range(d + 1)
                     if sigma[p] + tau[q] >= d + 1)


def permutations_from_treetype(S, d: int) -> tuple:
    """Recover ``(sigma, tau)`` from a treetype by counting coordinate occurrences."""
    first = [0] * (d + 1)
    second = [0] * (d + 1)
    for p1, q1 in S:
        if not (1 <= p1 <= d + 1 and 1 <= q1 <= d + 1):
            raise TreetypeDecodeError(f"tuple {(p1, q1)} outside 1..{d + 1}")
        first[p1 - 1] += 1
        second[q1 - 1] += 1
    sigma, tau = tuple(first), tuple(second)
    if sorted(sigma) != list(range(d + 1)) or sorted(tau) != list(range(d + 1)):
        raise TreetypeDecodeError(f"occurrence counts {sigma}, {tau} are not permutations")
    if treetype(sigma, tau) != frozenset(S):
        raise TreetypeDecodeError("set is not the treetype of any permutation pair")
    return sigma, tau


def permutation_sign(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# span and the deck conditions


@dataclass(frozen=True)
class SpanSet:
    elements: frozenset
    n: int

    @property
    def full(self) -> bool:
        return len(self.elements) == self.n


def pair_span(pair: PermutationPair, m_prev: int, m_cur: int, n: int) -> set:
    d = pair.d
    out = set()
    for p in range(d + 1):
        for q in range(d + 1):
            if pair.sigma[p] + pair.tau[q] >= d + 1:
                x = ((q + 1) * m_prev - (p + 1) * m_cur) % n
                out.add(x)
                out.add(-x % n)
    return out


def span(deck: Deck, m: Sequence[int], params: Params) -> SpanSet:
    n, d = params.n, params.d
    elems = set()
    for mj in m:
        elems |= multiples(mj, d, n, start=0)
    for i, pair in enumerate(deck, 1):
        elems |= pair_span(pair, m[i - 1], m[i], n)
    return SpanSet(frozenset(elems), n)


@dataclass
class DeckReport:
    span_full: bool
    adjacent_ok: bool
    last_entries_ok: bool
    trees_ok: bool | None = None
    messages: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.span_full and self.adjacent_ok and self.last_entries_ok and self.trees_ok is not False

    def __bool__(self) -> bool:
        return self.ok


def deck_conditions(deck: Deck, m: Sequence[int], params: Params,
                    verify_trees: bool = False) -> DeckReport:
    """Check the three deck conditions; optionally rebuild tree 0 as well."""
    d, k = params.d, params.k
    deck = make_deck(deck)
    if len(deck) != k:
        raise DeckError(f"deck has {len(deck)} pairs, expected {k}")
    if any(p.d != d for p in deck):
        raise DeckError(f"deck permutations must act on 0..{d}")
    m = check_m_vector(m, params)
    msgs = []
    sp = span(deck, m, params)
    if not sp.full:
        msgs.append(f"span covers {len(sp.elements)} of {params.n} residues")
    adjacent = True
    for i in range(2, k + 1):
        for t in range(d):
            if deck[i - 1].tau[t] + deck[i - 2].sigma[t] < 1:
                adjacent = False
                msgs.append(f"tau_{i}({t}) + sigma_{i - 1}({t}) = 0")
    last = True
    for i, pair in enumerate(deck, 1):
        if pair.sigma[d] < 1 or pair.tau[d] < 1:
            last = False
            msgs.append(f"sigma_{i}({d}) or tau_{i}({d}) is 0")
    report = DeckReport(sp.full, adjacent, last, messages=msgs)
    if verify_trees and report.ok:
        try:
            build_tree(0, deck, m, make_graph(params, m))
            report.trees_ok = True
        except TreeConstructionError as exc:
            report.trees_ok = False
            msgs.append(str(exc))
    return report


# ---------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class InducedTree:
    root: int
    vertices: frozenset
    edges: frozenset


def tree_vertices(j: int, deck: Deck, m: Sequence[int], params: Params) -> set:
    """Vertex set of the tree rooted at angle ``j`` (before inducing)."""
    d, k, n = params.d, params.k, params.n
    verts = set()
    for i in range(k + 1):
        r = (d + 1) * i
        verts.update(r * n + (j + t * m[i]) % n for t in range(d + 2))
    verts.update(r * n + j % n for r in range(params.rings))
    for i in range(k + 1):
        r = (d + 1) * i
        for l in range(1, d + 2):
            a = (j + l * m[i]) % n
            if i < k:
                verts.update((r + s) * n + a for s in range(deck[i].tau[l - 1] + 1))
            if i > 0:
                verts.update((r - s) * n + a for s in range(deck[i - 1].sigma[l - 1] + 1))
    return verts


def induced_edges(graph: SpiderwebGraph, verts) -> frozenset:
    return frozenset((a, b) for a in verts for b in graph.adjacency[a] if a < b and b in verts)


def _is_tree(verts, edges) -> bool:
    if len(edges) != len(verts) - 1:
        return False
    adj = {v: [] for v in verts}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(verts))
    seen = {start}
    q = deque([start])
    while q:
        for w in adj[q.popleft()]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) == len(verts)


def build_tree(j: int, deck: Deck, m: Sequence[int], graph: SpiderwebGraph) -> InducedTree:
    params = graph.params
    d, n = params.d, params.n
    deck = make_deck(deck)
    verts = tree_vertices(j, deck, m, params)
    edges = induced_edges(graph, verts)
    if len(verts) != n - d - 1:
        raise TreeConstructionError(
            f"tree {j} has {len(verts)} vertices, expected n-d-1 = {n - d - 1} (tree size count)")
    if not _is_tree(verts, edges):
        raise TreeConstructionError(f"induced subgraph {j} is not a tree")
    tdeg = dict.fromkeys(verts, 0)
    for a, b in edges:
        tdeg[a] += 1
        tdeg[b] += 1
    for u in verts:
        if graph.degree(u) - tdeg[u] > 1:
            raise TreeConstructionError(
                f"vertex {graph.split(u)} of tree {j} has deg_G - deg_T = "
                f"{graph.degree(u) - tdeg[u]} > 1 (degree condition)")
    return InducedTree(j % n, frozenset(verts), edges)


def rotate_tree(tree: InducedTree, graph: SpiderwebGraph, j: int) -> InducedTree:
    rot = graph.rotate
    return InducedTree((tree.root + j) % graph.n,
                       frozenset(rot(u, j) for u in tree.vertices),
                       frozenset(tuple(sorted((rot(a, j), rot(b, j)))) for a, b in tree.edges))


def build_trees(deck: Deck, m: Sequence[int], graph: SpiderwebGraph) -> list:
    """All n trees; tree j is the j-th rotation of tree 0."""
    t0 = build_tree(0, deck, m, graph)
    return [t0] + [rotate_tree(t0, graph, j) for j in range(1, graph.n)]


def trees_intersect(deck: Deck, m: Sequence[int], j: int, params: Params) -> bool:
    deck = make_deck(deck)
    a = tree_vertices(0, deck, m, params)
    b = tree_vertices(j, deck, m, params)
    return not a.isdisjoint(b)


# ---------------------------------------------------------------------------
# enumeration helpers


def permutations_of_type(d: int, ell: int) -> list:
    """All permutations of 0..d with value 0 at position ``ell``, sorted."""
    return sorted(p for p in permutations(range(d + 1)) if p[ell] == 0)


def treetype_size(d: int) -> int:
    return comb(d + 1, 2)


# ---------------------------------------------------------------------------
# .deck text format


def normalize_m(m: Sequence[int], n: int) -> tuple:
    """Scale the m-vector so that its last entry is 1 (when that entry is a unit)."""
    if gcd(m[-1], n) != 1:
        return tuple(x % n for x in m)
    inv = pow(m[-1] % n, -1, n)
    return tuple(x * inv % n for x in m)


def format_deck(params: Params, m: Sequence[int], deck: Deck, comments: Sequence[str] = ()) -> str:
    n = params.n
    m = normalize_m(check_m_vector(m, params), n)
    lines = [f"# {c}" for c in comments]
    lines += [f"d {params.d}", f"k {params.k}", "m " + " ".join(map(str, m))]
    for i in range(params.k, 0, -1):
        pair = deck[i - 1]
        lines.append(f"sigma {i} " + " ".join(map(str, pair.sigma)))
        lines.append(f"tau {i} " + " ".join(map(str, pair.tau)))
    return "\n".join(lines) + "\n"


class DeckParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def parse_deck(text: str):
    """Parse ``.deck`` text into ``(params, m, deck)``."""
    d = k = m = None
    sig: dict = {}
    tau: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        try:
            vals = [int(t) for t in rest]
        except ValueError:
            raise DeckParseError(f"non-integer value in {raw.strip()!r}", lineno) from None
        if key in ("d", "k"):
            if len(vals) != 1:
                raise DeckParseError(f"'{key}' takes one value", lineno)
            if key == "d":
                d = vals[0]
            else:
                k = vals[0]
        elif key == "m":
            m = tuple(vals)
        elif key in ("sigma", "tau"):
            if d is None or k is None or not vals:
                raise DeckParseError(f"'{key}' before 'd'/'k' headers", lineno)
            i, perm = vals[0], tuple(vals[1:])
            if not 1 <= i <= k:
                raise DeckParseError(f"index {i} outside 1..{k}", lineno)
            if sorted(perm) != list(range(d + 1)):
                raise DeckParseError(f"{perm} is not a permutation of 0..{d}", lineno)
            (sig if key == "sigma" else tau)[i] = perm
        else:
            raise DeckParseError(f"unknown keyword {key!r}", lineno)
    if d is None or k is None or m is None:
        raise DeckParseError("missing 'd', 'k' or 'm'")
    if set(sig) != set(range(1, k + 1)) or set(tau) != set(range(1, k + 1)):
        raise DeckParseError("every index 1..k needs one sigma and one tau line")
    params = Params(d, k)
    try:
        m = check_m_vector(m, params)
    except DeckError as exc:
        raise DeckParseError(str(exc)) from None
    deck = tuple(PermutationPair(sig[i], tau[i]) for i in range(1, k + 1))
    return params, m, deck


def write_deck(path, params: Params, m, deck, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_deck(params, m, deck, comments))


def read_deck(path):
    with open(path, encoding="utf-8") as fh:
        return parse_deck(fh.read())
