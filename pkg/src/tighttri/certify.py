"""Stacked-ball and stacked-sphere recognition and tightness certificates.

A certificate runs a fixed list of combinatorial checks and combines them with
known sufficient (and, in dimension three, necessary) criteria for mod-2
tightness.  Each check line carries a short statement of the criterion it feeds.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from math import comb

from .simplicial import (
    FacetComplex,
    boundary_complex,
    dual_graph,
    is_closed,
    is_connected,
    is_k_neighbourly,
    is_weak_pseudomanifold,
    link,
    skeleton,
)
from .zhomology import betti1_z2, is_orientable


class FormulaError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# stackedness


def _is_cycle(S: FacetComplex) -> bool:
    deg = Counter(v for f in S.facets for v in f)
    return all(c == 2 for c in deg.values()) and is_connected(S)


def is_stacked_sphere(S: FacetComplex) -> bool:
    """Whether the closed complex ``S`` is the boundary of a stacked ball.

    Every cycle counts as a stacked 1-sphere.  From dimension 2 on, vertices of
    degree D+1 whose link is the boundary of a simplex not already present are
    removed one at a time (the star is replaced by a single facet) until only
    the boundary of a simplex remains.
    """
    D = S.dim
    if not S.facets:
        raise ValueError("empty complex")
    if D == 0:
        return len(S.facets) == 2
    if not is_closed(S):
        raise ValueError("stacked-sphere test needs a closed weak pseudomanifold")
    if D == 1:
        return _is_cycle(S)
    facets = set(S.facets)
    inc: dict = {}
    for f in facets:
        for v in f:
            inc.setdefault(v, set()).add(f)
    todo = [v for v, fs in inc.items() if len(fs) == D + 1]
    while len(facets) > D + 2:
        progressed = False
        while todo:
            v = todo.pop()
            fs = inc.get(v)
            if fs is None or len(fs) != D + 1:
                continue
            nbrs = set().union(*fs)
            nbrs.discard(v)
            if len(nbrs) != D + 1:
                continue
            new = tuple(sorted(nbrs))
            if new in facets:
                continue
            for f in fs:
                facets.discard(f)
                for u in f:
                    if u != v:
                        inc[u].discard(f)
            del inc[v]
            facets.add(new)
            for u in new:
                inc[u].add(new)
                if len(inc[u]) == D + 1:
                    todo.append(u)
            progressed = True
            break
        if not progressed:
            return False
    return len(facets) == D + 2 and len(inc) == D + 2


def is_stacked_ball(B: FacetComplex) -> bool:
    """Dual graph a tree and leaf peeling succeeds.

    A dual leaf may be removed when exactly one of its vertices lies in no
    other remaining facet; success means a single facet is left.
    """
    if not B.facets:
        return False
    if not is_weak_pseudomanifold(B) or not dual_graph(B).is_tree():
        return False
    D = B.dim
    facets = list(B.facets)
    alive = set(range(len(facets)))
    count = Counter(v for f in facets for v in f)
    ridges: dict = {}
    for i, f in enumerate(facets):
        for r in range(D + 1):
            ridges.setdefault(f[:r] + f[r + 1:], []).append(i)
    nbrs = [set() for _ in facets]
    for idxs in ridges.values():
        if len(idxs) == 2:
            a, b = idxs
            nbrs[a].add(b)
            nbrs[b].add(a)

    def removable(i):
        return len(nbrs[i]) <= 1 and sum(1 for v in facets[i] if count[v] == 1) == 1

    todo = [i for i in alive if removable(i)]
    while len(alive) > 1:
        while todo and (todo[-1] not in alive or not removable(todo[-1])):
            todo.pop()
        if not todo:
            return False
        i = todo.pop()
        alive.discard(i)
        for v in facets[i]:
            count[v] -= 1
        for j in nbrs[i]:
            nbrs[j].discard(i)
            if removable(j):
                todo.append(j)
        nbrs[i] = set()
        # a neighbour-of-neighbour may gain a private vertex
        for j in list(alive):
            if j not in todo and removable(j):
                todo.append(j)
    return True


def is_locally_stacked(M: FacetComplex) -> bool:
    """Every vertex link is a stacked sphere."""
    return all(is_stacked_sphere(link(M, v)) for v in M.vertices)


def is_stacked_bounded(K: FacetComplex) -> bool:
    """All interior faces of K have dimension at least dim K - 1."""
    B = boundary_complex(K)
    if not B.facets:
        return False
    D = K.dim
    if D < 2:
        return True
    return skeleton(K, D - 2) == skeleton(B, D - 2)


def is_tight_neighbourly(M: FacetComplex, betti1: int | None = None) -> bool:
    """``C(f0 - d - 1, 2) == C(d + 2, 2) * b1`` with mod-2 b1."""
    d = M.dim
    if d < 3:
        raise ValueError("tight-neighbourly identity is only defined in dimension >= 3")
    if betti1 is None:
        betti1 = betti1_z2(M)
    f0 = len(M.vertices)
    return comb(f0 - d - 1, 2) == comb(d + 2, 2) * betti1


def betti_from_formula(d: int, k: int) -> int:
    """First Betti number of the boundary predicted from (d, k)."""
    if d < 2 or k < 0:
        raise ValueError("need d >= 2 and k >= 0")
    num = comb((d + 1) * ((d + 2) * k + 1) + 1, 2)
    if d == 2:
        num *= 2
    den = comb(d + 2, 2)
    if num % den:
        raise FormulaError(f"{num}/{den} is not an integer")
    return num // den


# ---------------------------------------------------------------------------
# certificates

CITE = {
    "connected": "tightness requires a connected complex",
    "closed": "every ridge lies in exactly two facets",
    "neighbourly": "tightness in degree 0 forces every vertex pair to span an edge",
    "locally-stacked": "every vertex link is a stacked sphere (class K(d), a combinatorial manifold)",
    "links-stacked-balls": "every vertex link is a stacked ball (class of stacked manifolds with boundary)",
    "stacked-bounded": "all interior faces have dimension >= dim - 1",
    "betti1": "first mod-2 Betti number by GF(2) rank",
    "tight-neighbourly": "C(f0-d-1,2) = C(d+2,2) b1; for neighbourly closed d-manifolds, d >= 3, "
                         "equivalent to being stacked",
    "orientable": "reported only; mod-2 orientability is automatic",
    "surface": "a triangulated surface is tight iff its edge graph is complete",
    "dim3": "a tight-neighbourly 3-manifold is tight; a neighbourly member of K(3) is tight "
            "iff tight-neighbourly",
    "dim4+": "for d != 3 the neighbourly members of K(d) are tight",
    "bounded": "a neighbourly stacked manifold with boundary of dimension >= 3 is tight over every field",
}


@dataclass
class Check:
    name: str
    passed: bool
    citation: str
    detail: str = ""

    def line(self) -> str:
        extra = f" [{self.detail}]" if self.detail else ""
        return f"{self.name} {'PASS' if self.passed else 'FAIL'} {self.citation}{extra}"


@dataclass
class Certificate:
    digest: str
    provenance: list
    checks: list = field(default_factory=list)
    verdict: str = "not-certified"
    betti1: int | None = None
    orientable: bool | None = None

    def passed(self, name: str) -> bool:
        return any(c.name == name and c.passed for c in self.checks)

    def report(self) -> str:
        lines = [f"# subject {self.digest}"] + [f"# {p}" for p in self.provenance]
        lines += [c.line() for c in self.checks]
        lines.append(f"VERDICT {self.verdict}")
        return "\n".join(lines) + "\n"

    def body_digest(self) -> str:
        """Digest of checks and verdict only (independent of vertex labels)."""
        body = "\n".join([c.line() for c in self.checks] + [f"VERDICT {self.verdict}"])
        return hashlib.sha256(body.encode()).hexdigest()[:16]


def complex_digest(X: FacetComplex) -> str:
    text = ";".join(" ".join(map(str, f)) for f in X.facets)
    return hashlib.sha256(f"{X.dim}|{text}".encode()).hexdigest()[:16]


def certify_tight(M: FacetComplex, d: int | None = None, context=(),
                  orientation: bool = True) -> Certificate:
    """Assemble a tightness certificate for a closed or bounded complex ``M``.

    ``d`` is the dimension of the closed manifold of interest: ``dim M`` for a
    closed input; for a bounded input it may be given as ``dim M`` or
    ``dim M - 1`` (the boundary's dimension).
    """
    if not M.facets:
        raise ValueError("empty complex")
    cert = Certificate(complex_digest(M), list(context))
    add = cert.checks.append
    closed = is_closed(M)
    if d is not None and d not in ((M.dim,) if closed else (M.dim, M.dim - 1)):
        raise ValueError(f"d={d} does not match a complex of dimension {M.dim}")

    conn = is_connected(M)
    add(Check("CONNECTED", conn, CITE["connected"]))
    if not conn:
        cert.verdict = "refuted"
        return cert
    neigh = is_k_neighbourly(M, 2)
    add(Check("NEIGHBOURLY", neigh, CITE["neighbourly"]))
    if not neigh:
        cert.verdict = "refuted"
        return cert

    if closed:
        return _certify_closed(M, cert, orientation)
    return _certify_bounded(M, cert)


def _certify_closed(M: FacetComplex, cert: Certificate, orientation: bool) -> Certificate:
    add = cert.checks.append
    D = M.dim
    add(Check("CLOSED", True, CITE["closed"]))
    ls = is_locally_stacked(M)
    add(Check("LOCALLY-STACKED", ls, CITE["locally-stacked"]))
    b1 = betti1_z2(M)
    cert.betti1 = b1
    add(Check("BETTI1", True, CITE["betti1"], f"b1={b1}"))
    tn = None
    if D >= 3:
        tn = is_tight_neighbourly(M, b1)
        add(Check("TIGHT-NEIGHBOURLY", tn, CITE["tight-neighbourly"],
                  f"f0={len(M.vertices)} d={D} b1={b1}"))
    if orientation:
        o = is_orientable(M)
        cert.orientable = o
        add(Check("ORIENTABLE", o, CITE["orientable"]))

    if not ls:
        cert.verdict = "not-certified"
    elif D <= 2:
        add(Check("CRITERION", True, CITE["surface"]))
        cert.verdict = "tight"
    elif D == 3:
        add(Check("CRITERION", bool(tn), CITE["dim3"]))
        cert.verdict = "tight" if tn else "refuted"
    else:
        add(Check("CRITERION", True, CITE["dim4+"]))
        cert.verdict = "tight"
    return cert


def _certify_bounded(M: FacetComplex, cert: Certificate) -> Certificate:
    add = cert.checks.append
    wp = is_weak_pseudomanifold(M)
    add(Check("CLOSED", False, CITE["closed"], "has boundary"))
    balls = wp and all(is_stacked_ball(link(M, v)) for v in M.vertices)
    add(Check("LINKS-STACKED-BALLS", balls, CITE["links-stacked-balls"]))
    sb = wp and is_stacked_bounded(M)
    add(Check("STACKED-BOUNDED", sb, CITE["stacked-bounded"]))
    ok = balls and sb and M.dim >= 3
    add(Check("CRITERION", ok, CITE["bounded"], f"dim={M.dim}"))
    cert.verdict = "tight" if ok else "not-certified"
    return cert
