"""Mod-2 simplicial homology, orientability and brute-force tightness."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .simplicial import (
    ComplexStructureError,
    FacetComplex,
    faces_by_dim,
    is_connected,
    ridge_incidence,
)


@dataclass(frozen=True)
class BitMatrix:
    """A GF(2) matrix stored as one Python int per column.

    Bit ``r`` of ``columns[c]`` is entry ``(r, c)``.
    """

    rows: int
    cols: int
    columns: tuple

    def entry(self, r: int, c: int) -> int:
        return (self.columns[c] >> r) & 1

    def transpose(self) -> "BitMatrix":
        out = [0] * self.rows
        for c, col in enumerate(self.columns):
            while col:
                low = col & -col
                out[low.bit_length() - 1] |= 1 << c
                col ^= low
        return BitMatrix(self.cols, self.rows, tuple(out))

    def rank(self) -> int:
        return gf2_rank(self.columns)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for col in other.columns:
            acc = 0
            while col:
                low = col & -col
                acc ^= self.columns[low.bit_length() - 1]
                col ^= low
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.columns)


def gf2_rank(vectors) -> int:
    """Rank of a collection of GF(2) vectors packed into ints."""
    basis: dict = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
    return len(basis)


class _Reducer:
    """Incremental row-echelon basis keyed by leading bit."""

    def __init__(self):
        self.basis: dict = {}

    def reduce(self, v: int) -> int:
        while v:
            b = self.basis.get(v.bit_length() - 1)
            if b is None:
                return v
            v ^= b
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.basis[v.bit_length() - 1] = v
            return True
        return False

    def __len__(self):
        return len(self.basis)


def _kernel(columns, ncols: int) -> list:
    """Basis of the kernel of the map whose column images are ``columns``.

    Kernel vectors are returned as ints over the column index set.
    """
    basis: dict = {}  # leading bit -> (image, combination)
    kernel = []
    for c in range(ncols):
        img, comb_ = columns[c], 1 << c
        while img:
            top = img.bit_length() - 1
            hit = basis.get(top)
            if hit is None:
                basis[top] = (img, comb_)
                break
            img ^= hit[0]
            comb_ ^= hit[1]
        if not img:
            kernel.append(comb_)
    return kernel


def _index(faces) -> dict:
    return {f: i for i, f in enumerate(faces)}


def _boundary_columns(faces_hi, index_lo: dict) -> tuple:
    cols = []
    for f in faces_hi:
        col = 0
        for i in range(len(f)):
            col |= 1 << index_lo[f[:i] + f[i + 1:]]
        cols.append(col)
    return tuple(cols)


def boundary_matrix(X: FacetComplex, j: int) -> BitMatrix:
    """Matrix of the boundary map C_j -> C_{j-1}, faces in sorted order."""
    if not 1 <= j <= X.dim:
        raise ValueError(f"boundary index {j} outside 1..{X.dim}")
    faces = faces_by_dim(X)
    lo, hi = faces[j - 1], faces[j]
    return BitMatrix(len(lo), len(hi), _boundary_columns(hi, _index(lo)))


def betti_z2(X: FacetComplex) -> tuple:
    """Mod-2 Betti numbers (b_0, ..., b_dim)."""
    faces = faces_by_dim(X)
    if not faces:
        return ()
    ranks = [0] * (X.dim + 2)
    for j in range(1, X.dim + 1):
        ranks[j] = gf2_rank(_boundary_columns(faces[j], _index(faces[j - 1])))
    return tuple(len(faces[j]) - ranks[j] - ranks[j + 1] for j in range(X.dim + 1))


def betti1_z2(X: FacetComplex) -> int:
    """First mod-2 Betti number only; skips the expensive top-dimensional ranks."""
    faces = faces_by_dim(X)
    if X.dim < 1:
        return 0
    r1 = gf2_rank(_boundary_columns(faces[1], _index(faces[0])))
    r2 = gf2_rank(_boundary_columns(faces[2], _index(faces[1]))) if X.dim >= 2 else 0
    return len(faces[1]) - r1 - r2


def _ridge_sign(facet: tuple, ridge: tuple) -> int:
    """Incidence sign of ``ridge`` in the ascending-ordered ``facet``."""
    pos = next(i for i, v in enumerate(facet) if v not in ridge)
    return -1 if pos % 2 else 1


def orientation(X: FacetComplex):
    """A coherent orientation as a list of +-1 per facet, or None.

    Propagates along a breadth-first spanning tree of the dual graph, then
    checks every remaining interior ridge.
    """
    if not X.facets:
        raise ComplexStructureError("empty complex")
    inc = ridge_incidence(X)
    if any(len(v) > 2 for v in inc.values()):
        raise ComplexStructureError("not a weak pseudomanifold")
    adj = [[] for _ in X.facets]
    for r, idxs in inc.items():
        if len(idxs) == 2:
            a, b = idxs
            adj[a].append((b, r))
            adj[b].append((a, r))
    signs = [0] * len(X.facets)
    signs[0] = 1
    q = deque([0])
    while q:
        a = q.popleft()
        for b, r in adj[a]:
            # coherent: the two induced orientations on r are opposite
            want = -signs[a] * _ridge_sign(X.facets[a], r) * _ridge_sign(X.facets[b], r)
            if signs[b] == 0:
                signs[b] = want
                q.append(b)
            elif signs[b] != want:
                return None
    if any(s == 0 for s in signs):
        raise ComplexStructureError("dual graph is disconnected")
    return signs


def is_orientable(X: FacetComplex) -> bool:
    return orientation(X) is not None


class TooManyVertices(ValueError):
    pass


def is_z2_tight_bruteforce(X: FacetComplex, max_vertices: int = 16) -> bool:
    """Check injectivity of H_j(X[W]) -> H_j(X) over all non-empty vertex sets W.

    For Y = X[W] the map is injective in degree j iff
    ``dim(Z_j(Y) ∩ B_j(X)) == dim B_j(Y)``; all spaces live in C_j(X).
    """
    verts = X.vertices
    if len(verts) > max_vertices:
        raise TooManyVertices(f"{len(verts)} vertices exceeds the limit of {max_vertices}")
    if not is_connected(X):
        return False
    faces = faces_by_dim(X)
    index = [_index(fs) for fs in faces]
    bd = [None] + [_boundary_columns(faces[j], index[j - 1]) for j in range(1, X.dim + 1)]
    # B_j(X) as a reduced basis in C_j(X)
    bx = []
    for j in range(X.dim + 1):
        red = _Reducer()
        if j + 1 <= X.dim:
            for col in bd[j + 1]:
                red.add(col)
        bx.append(red)
    bit = {v: 1 << i for i, v in enumerate(verts)}
    face_masks = [[sum(bit[v] for v in f) for f in fs] for fs in faces]

    for wmask in range(1, 1 << len(verts)):
        for j in range(X.dim + 1):
            ys = [i for i, m in enumerate(face_masks[j]) if m & wmask == m]
            if not ys:
                break
            if j == 0:
                cycles = [1 << i for i in ys]
            else:
                cycles = [
                    sum(1 << ys[t] for t in range(len(ys)) if (k >> t) & 1)
                    for k in _kernel([bd[j][i] for i in ys], len(ys))
                ]
            if not cycles:
                continue
            ys_next = ([i for i, m in enumerate(face_masks[j + 1]) if m & wmask == m]
                       if j + 1 <= X.dim else [])
            b_y = gf2_rank([bd[j + 1][i] for i in ys_next]) if ys_next else 0
            # dim(Z ∩ B_X) = dim Z + dim B_X - dim(Z + B_X)
            red = _Reducer()
            red.basis = dict(bx[j].basis)
            added = sum(1 for z in cycles if red.add(z))
            if len(cycles) - added != b_y:
                return False
    return True
