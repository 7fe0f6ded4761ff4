"""Independent reference computations used by the tests (dense numpy arrays)."""

from __future__ import annotations

from itertools import combinations

import numpy as np


def faces(facets, j):
    return sorted({c for f in facets for c in combinations(f, j + 1)})


def gf2_rank(M: np.ndarray) -> int:
    A = (M.copy() % 2).astype(np.uint8)
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if A[r, c]), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] ^= A[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def boundary(facets, j, signed=False) -> np.ndarray:
    lo, hi = faces(facets, j - 1), faces(facets, j)
    idx = {f: i for i, f in enumerate(lo)}
    M = np.zeros((len(lo), len(hi)), dtype=np.int64)
    for c, f in enumerate(hi):
        for i in range(len(f)):
            M[idx[f[:i] + f[i + 1:]], c] = (-1) ** i if signed else 1
    return M


def betti(facets) -> tuple:
    dim = len(facets[0]) - 1
    f = [len(faces(facets, j)) for j in range(dim + 1)]
    r = [0] + [gf2_rank(boundary(facets, j)) for j in range(1, dim + 1)] + [0]
    return tuple(f[j] - r[j] - r[j + 1] for j in range(dim + 1))


def orientable(facets) -> bool:
    """A closed connected pseudomanifold is orientable iff its top integral cycle space is non-zero."""
    dim = len(facets[0]) - 1
    M = boundary(facets, dim, signed=True).astype(float)
    return bool(np.linalg.matrix_rank(M) == len(facets) - 1)


def tight_bruteforce(facets) -> bool:
    """Injectivity H_j(X[W]) -> H_j(X) for every W, via ranks of stacked matrices."""
    dim = len(facets[0]) - 1
    verts = sorted({v for f in facets for v in f})
    fs = [faces(facets, j) for j in range(dim + 1)]
    bd = [None] + [boundary(facets, j) for j in range(1, dim + 1)]
    for size in range(1, len(verts) + 1):
        for W in combinations(verts, size):
            w = set(W)
            for j in range(dim + 1):
                ys = [i for i, f in enumerate(fs[j]) if set(f) <= w]
                if not ys:
                    break
                # H_j(Y) -> H_j(X) injective iff rank[B_j(X) | Z_j(Y)] - rank B_j(X) == dim Z_j(Y) - dim B_j(Y)
                rk_d = gf2_rank(bd[j][:, ys]) if j > 0 else 0
                zdim = len(ys) - rk_d
                if j < dim:
                    yn = [i for i, f in enumerate(fs[j + 1]) if set(f) <= w]
                    by = gf2_rank(bd[j + 1][:, yn]) if yn else 0
                    bx = bd[j + 1]
                else:
                    by, bx = 0, np.zeros((len(fs[j]), 0), dtype=np.int64)
                # kernel of the restricted boundary as explicit vectors in C_j(X)
                Z = _kernel_vectors(bd[j][:, ys] if j > 0 else np.zeros((0, len(ys)), dtype=np.int64),
                                    ys, len(fs[j]))
                assert Z.shape[1] == zdim
                rb = gf2_rank(bx) if bx.shape[1] else 0
                joint = gf2_rank(np.hstack([bx, Z])) if Z.shape[1] else rb
                if joint - rb != zdim - by:
                    return False
    return True


def _kernel_vectors(A: np.ndarray, cols: list, ambient: int) -> np.ndarray:
    """GF(2) kernel of A, embedded into the ambient chain space on ``cols``."""
    m, n = A.shape
    R = (A % 2).astype(np.uint8).copy()
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if R[i, c]), None)
        if piv is None:
            continue
        R[[r, piv]] = R[[piv, r]]
        for i in range(m):
            if i != r and R[i, c]:
                R[i] ^= R[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((ambient, len(free)), dtype=np.int64)
    for t, fc in enumerate(free):
        v = np.zeros(n, dtype=np.uint8)
        v[fc] = 1
        for row, pc in enumerate(pivots):
            if R[row, fc]:
                v[pc] = 1
        for i in range(n):
            if v[i]:
                out[cols[i], t] = 1
    return out


def stacked_ball_keys(dim: int, moves: int) -> dict:
    """Canonical keys of all stacked balls built by at most ``moves`` gluings.

    Returns ``{number_of_facets: (ball_keys, sphere_keys)}``; a gluing attaches
    a new simplex with one fresh vertex along a boundary ridge.
    """
    from tighttri.isomorphism import canonical_key
    from tighttri.simplicial import FacetComplex, boundary_complex

    start = FacetComplex.from_facets([tuple(range(dim + 1))])
    level = {canonical_key(start): start}
    out = {1: ({canonical_key(start)}, {canonical_key(boundary_complex(start))})}
    for step in range(1, moves + 1):
        nxt = {}
        for X in level.values():
            fresh = len(X.vertices)
            for ridge in boundary_complex(X).facets:
                Y = FacetComplex.from_facets(list(X.facets) + [ridge + (fresh,)])
                nxt.setdefault(canonical_key(Y), Y)
        level = nxt
        out[step + 1] = (set(level), {canonical_key(boundary_complex(Y)) for Y in level.values()})
    return out


def cyclic_polytope_boundary(n: int, dim: int) -> list:
    """Facets of the boundary of the cyclic (dim+1)-polytope on n vertices (Gale evenness)."""
    out = []
    for S in combinations(range(n), dim + 1):
        s = set(S)
        ok = True
        outside = [v for v in range(n) if v not in s]
        for a, b in zip(outside, outside[1:]):
            if sum(1 for v in S if a < v < b) % 2:
                ok = False
                break
        if ok:
            out.append(S)
    return out
