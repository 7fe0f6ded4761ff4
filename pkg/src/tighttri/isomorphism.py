"""Isomorphism testing and canonical keys for pure complexes.

Vertices are coloured by cheap invariants, the colouring is refined on the
vertex/facet incidence structure, and ties are broken by individualising one
vertex at a time.  Every discrete colouring is a relabelling; the canonical
form is the lexicographically smallest relabelled facet list over the search
tree.  Leaves producing the same form reveal automorphisms, which are used to
skip equivalent branches.
"""

from __future__ import annotations

from array import array
from collections import Counter

from .simplicial import FacetComplex


def _rank(keys: list) -> list:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


class _Canonizer:
    def __init__(self, X: FacetComplex):
        self.dim = X.dim
        self.labels = X.vertices
        index = {v: i for i, v in enumerate(self.labels)}
        self.n = len(self.labels)
        self.facets = [tuple(index[v] for v in f) for f in X.facets]
        self.inc = [[] for _ in range(self.n)]
        for fi, f in enumerate(self.facets):
            for v in f:
                self.inc[v].append(fi)
        nbrs = [set() for _ in range(self.n)]
        for f in self.facets:
            for v in f:
                nbrs[v].update(f)
        self.initial = _rank([(len(self.inc[v]), len(nbrs[v])) for v in range(self.n)])
        self.best_form = None
        self.best_lab = None
        self.first_form = None
        self.first_lab = None
        self.automorphisms: list = []

    def refine(self, colors: list) -> list:
        ncol = len(set(colors))
        while True:
            fsig = [tuple(sorted(colors[v] for v in f)) for f in self.facets]
            fid = _rank(fsig)
            vsig = [(colors[v], tuple(sorted(fid[x] for x in self.inc[v]))) for v in range(self.n)]
            new = _rank(vsig)
            k = len(set(new))
            if k == ncol:
                return new
            colors, ncol = new, k

    @staticmethod
    def individualize(colors: list, v: int) -> list:
        return _rank([(c, 0 if u == v else 1) for u, c in enumerate(colors)])

    def form(self, lab: list) -> tuple:
        return tuple(sorted(tuple(sorted(lab[v] for v in f)) for f in self.facets))

    def leaf(self, lab: list) -> None:
        form = self.form(lab)
        if self.first_form is None:
            self.first_form, self.first_lab = form, lab
        for ref_form, ref_lab in ((self.first_form, self.first_lab), (self.best_form, self.best_lab)):
            if ref_form is not None and form == ref_form and ref_lab is not lab:
                inv = [0] * self.n
                for u, p in enumerate(ref_lab):
                    inv[p] = u
                auto = tuple(inv[lab[u]] for u in range(self.n))
                if any(auto[u] != u for u in range(self.n)):
                    self.automorphisms.append(auto)
                break
        if self.best_form is None or form < self.best_form:
            self.best_form, self.best_lab = form, lab

    def search(self, colors: list, prefix: tuple) -> None:
        colors = self.refine(colors)
        if len(set(colors)) == self.n:
            self.leaf(colors)
            return
        cells: dict = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = min(cells.values(), key=lambda cell: (len(cell) if len(cell) > 1 else self.n + 1,
                                                       colors[cell[0]]))
        explored: list = []
        for v in target:
            if explored and self._equivalent(v, explored, prefix):
                continue
            explored.append(v)
            self.search(self.individualize(colors, v), prefix + (v,))

    def _equivalent(self, v: int, explored: list, prefix: tuple) -> bool:
        gens = [a for a in self.automorphisms if all(a[p] == p for p in prefix)]
        if not gens:
            return False
        orbit = {v}
        todo = [v]
        while todo:
            u = todo.pop()
            for g in gens:
                w = g[u]
                if w not in orbit:
                    orbit.add(w)
                    todo.append(w)
        return any(w in orbit for w in explored)

    def run(self):
        if self.n == 0:
            return (), []
        self.search(self.initial, ())
        return self.best_form, self.best_lab


def canonical_labeling(X: FacetComplex):
    """Return ``(form, labeling)``.

    ``labeling`` maps each used vertex of ``X`` to its canonical position and
    ``form`` is the sorted facet list of ``X`` relabelled by it.
    """
    c = _Canonizer(X)
    form, lab = c.run()
    return form, {c.labels[i]: p for i, p in enumerate(lab)}


def canonical_key(X: FacetComplex) -> bytes:
    """Byte string that is equal for two complexes iff they are isomorphic."""
    form, lab = canonical_labeling(X)
    data = array("I", [X.dim, len(lab)])
    for f in form:
        data.extend(f)
    return data.tobytes()


def automorphism_generators(X: FacetComplex) -> list:
    """Automorphisms found as a side product of the canonical search."""
    c = _Canonizer(X)
    c.run()
    return [{c.labels[u]: c.labels[w] for u, w in enumerate(a)} for a in c.automorphisms]


def _cheap_invariant(X: FacetComplex):
    deg = Counter(v for f in X.facets for v in f)
    return X.dim, len(X.facets), len(deg), tuple(sorted(Counter(deg.values()).items()))


def is_isomorphic(X: FacetComplex, Y: FacetComplex):
    """A vertex bijection carrying the facets of X onto those of Y, or None."""
    if _cheap_invariant(X) != _cheap_invariant(Y):
        return None
    fx, lx = canonical_labeling(X)
    fy, ly = canonical_labeling(Y)
    if fx != fy:
        return None
    back = {p: v for v, p in ly.items()}
    return {u: back[p] for u, p in lx.items()}
