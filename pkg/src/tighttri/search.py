"""Depth-first search for m-vectors and permutation decks.

The deck search works on residue classes: every nonzero ``x`` in Z_n is
identified with ``-x``.  With the m-vector multiples pairwise disjoint, a deck
has full span exactly when the treetype cells of its pairs land on distinct
classes that together cover every class not already hit by a multiple.  Each
pair is therefore summarised by a bitmask of the classes it hits, and the DFS
only has to keep those masks disjoint.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import factorial, gcd

import numpy as np

from .spiderweb import (
    Params,
    PermutationPair,
    admissible_step,
    deck_conditions,
    multiples,
    permutations_of_type,
)

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# m-vectors


def step_candidates(d: int, k: int, units_only: bool = False) -> list:
    """Residues usable as entries of an m-vector.

    By default every residue whose multiples ``+-l x`` (1 <= l <= d+1) are
    distinct and nonzero; with ``units_only`` only the invertible ones.
    """
    n = Params(d, k).n
    if units_only:
        return [x for x in range(1, n) if gcd(x, n) == 1]
    return [x for x in range(1, n) if admissible_step(x, d, n)]


def enumerate_m_vectors(d: int, k: int, first=None, units_only: bool = False):
    """Yield m-vectors ``(m_0, ..., m_{k-1}, 1)`` depth first.

    A branch is cut as soon as the multiples ``{+-l m_i : 1 <= l <= d+1}`` of a
    new entry meet those of an entry already chosen.  ``first`` restricts the
    values of ``m_0`` (used to split work between processes).
    """
    n = Params(d, k).n
    units = step_candidates(d, k, units_only)
    mult = {x: frozenset(multiples(x, d, n)) for x in units}
    last = mult[1]

    def rec(prefix, used):
        if len(prefix) == k:
            yield prefix + (1,)
            return
        pool = units if prefix or first is None else [x for x in units if x in first]
        for x in pool:
            if used.isdisjoint(mult[x]):
                yield from rec(prefix + (x,), used | mult[x])

    yield from rec((), last)


# ---------------------------------------------------------------------------
# permutation pairs grouped by type


class PermBlockTable:
    """All pairs ``(sigma, tau)`` with zeros before position d, in type blocks.

    Block ``(l, m)`` holds the ``(d!)^2`` pairs with ``sigma(l) = tau(m) = 0``;
    blocks are stacked in lexicographic type order.  Pairs allowed to follow a
    pair of type ``(l, m)`` one level further down are those whose sigma-type
    differs from ``m``: a contiguous run of blocks, possibly wrapping around.
    """

    def __init__(self, d: int):
        self.d = d
        self.block = factorial(d) ** 2
        self.types = [(a, b) for a in range(d) for b in range(d)]
        sig, tau = [], []
        for a, b in self.types:
            for s, t in product(permutations_of_type(d, a), permutations_of_type(d, b)):
                sig.append(s)
                tau.append(t)
        self.sigma = np.array(sig, dtype=np.int8)
        self.tau = np.array(tau, dtype=np.int8)
        self.size = len(sig)
        cells = self.sigma[:, :, None] + self.tau[:, None, :] >= d + 1
        self.cells = cells.reshape(self.size, (d + 1) ** 2).astype(np.float32)

    def __len__(self) -> int:
        return self.size

    def pair(self, idx: int) -> PermutationPair:
        return PermutationPair(tuple(int(x) for x in self.sigma[idx]),
                               tuple(int(x) for x in self.tau[idx]))

    def type_of(self, idx: int) -> tuple:
        return self.types[idx // self.block]

    def compatible_ranges(self, tau_type: int) -> list:
        """Index ranges of pairs whose sigma-type differs from ``tau_type``."""
        d, b = self.d, self.block
        start, stop = (tau_type + 1) * d * b, tau_type * d * b
        if start >= self.size:
            return [(0, stop)]
        return [(start, self.size), (0, stop)] if stop > 0 else [(start, self.size)]

    def compatible_count(self) -> int:
        return (self.d - 1) * self.d * self.block


@lru_cache(maxsize=8)
def perm_block_table(d: int) -> PermBlockTable:
    return PermBlockTable(d)


class _Level:
    """Pairs at one deck level for a fixed ``(m_{i-1}, m_i)``.

    A pair is kept when its treetype cells hit pairwise distinct nonzero
    classes; its mask records those classes (bit ``c - 1`` for class ``c``).
    """

    def __init__(self, table: PermBlockTable, m_prev: int, m_cur: int, n: int):
        d = table.d
        nclass = (n - 1) // 2
        onehot = np.zeros(((d + 1) ** 2, nclass + 1), dtype=np.float32)
        for p in range(d + 1):
            for q in range(d + 1):
                x = ((q + 1) * m_prev - (p + 1) * m_cur) % n
                onehot[p * (d + 1) + q, min(x, n - x)] = 1
        counts = table.cells @ onehot
        ok = (counts[:, 0] == 0) & (counts[:, 1:].max(axis=1) <= 1)
        self.valid = np.flatnonzero(ok)
        hits = counts[self.valid, 1:] > 0
        self.masks = {}
        for idx, row in zip(self.valid.tolist(), hits):
            mask = 0
            for c in np.flatnonzero(row).tolist():
                mask |= 1 << c
            self.masks[idx] = mask
        self._by_type: dict = {}
        self._lookup: dict = {}

    def candidates(self, table: PermBlockTable, tau_type):
        """Kept indices, restricted to those compatible with ``tau_type`` if given."""
        if tau_type is None:
            return self.valid
        got = self._by_type.get(tau_type)
        if got is None:
            parts = [self.valid[(self.valid >= a) & (self.valid < b)]
                     for a, b in table.compatible_ranges(tau_type)]
            got = np.concatenate(parts).tolist() if parts else []
            self._by_type[tau_type] = got
        return got

    def lookup(self, table: PermBlockTable, tau_type, mask: int) -> list:
        """Compatible pairs whose class mask equals ``mask``."""
        got = self._lookup.get(tau_type)
        if got is None:
            got = {}
            cand = self.candidates(table, tau_type)
            for idx in (cand.tolist() if isinstance(cand, np.ndarray) else cand):
                got.setdefault(self.masks[idx], []).append(idx)
            self._lookup[tau_type] = got
        return got.get(mask, [])


class DeckSearcher:
    """Deck enumeration for fixed ``(d, k)``, caching level data per m pair."""

    def __init__(self, d: int, k: int, table: PermBlockTable | None = None):
        self.params = Params(d, k)
        self.table = table if table is not None else (perm_block_table(d) if k > 0 else None)
        self._levels: dict = {}
        n = self.params.n
        self.full_mask = (1 << ((n - 1) // 2)) - 1

    def _level(self, m_prev: int, m_cur: int) -> _Level:
        key = (m_prev, m_cur)
        lvl = self._levels.get(key)
        if lvl is None:
            lvl = _Level(self.table, m_prev, m_cur, self.params.n)
            self._levels[key] = lvl
        return lvl

    def multiples_mask(self, m) -> int:
        d, n = self.params.d, self.params.n
        mask = 0
        for x in m:
            for y in multiples(x, d, n):
                mask |= 1 << (min(y, n - y) - 1)
        return mask

    def decks(self, m):
        """Yield decks (entry i-1 holds ``(sigma_i, tau_i)``) completing ``m``.

        Levels are filled from i = k down to 1; below the top level only pairs
        compatible with the level above are scanned.
        """
        d, k = self.params.d, self.params.k
        m = tuple(m)
        if k == 0:
            yield ()
            return
        table = self.table
        levels = {i: self._level(m[i - 1], m[i]) for i in range(1, k + 1)}
        chosen = [0] * (k + 1)
        full = self.full_mask

        def rec(i, used, tau_type):
            lvl = levels[i]
            if i == 1:
                for idx in lvl.lookup(table, tau_type, full ^ used):
                    chosen[1] = idx
                    yield tuple(chosen[1:])
                return
            masks = lvl.masks
            cand = lvl.candidates(table, tau_type)
            for idx in (cand.tolist() if isinstance(cand, np.ndarray) else cand):
                mk = masks[idx]
                if mk & used:
                    continue
                chosen[i] = idx
                yield from rec(i - 1, used | mk, table.type_of(idx)[1])

        for idxs in rec(k, self.multiples_mask(m), None):
            deck = tuple(table.pair(i) for i in idxs)
            report = deck_conditions(deck, m, self.params)
            if not report.ok:
                raise AssertionError(f"search produced a deck failing the conditions: {report.messages}")
            yield deck


def enumerate_decks(d: int, k: int, m, table: PermBlockTable | None = None):
    yield from DeckSearcher(d, k, table).decks(m)


# ---------------------------------------------------------------------------
# the search engine


@dataclass(frozen=True)
class SearchTask:
    d: int
    k: int
    dedup: bool = True
    jobs: int = 1
    out: str | None = None
    units_only: bool = False

    def __post_init__(self):
        if self.d < 2 or self.k < 0:
            raise ValueError(f"need d >= 2 and k >= 0, got d={self.d}, k={self.k}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")


@dataclass(frozen=True)
class Solution:
    m: tuple
    deck: tuple
    key: bytes
    certificate: str
    verdict: str
    betti1: int | None = None
    orientable: bool | None = None

    @property
    def params(self) -> Params:
        d = len(self.deck[0].sigma) - 1 if self.deck else None
        return Params(d, len(self.deck)) if d is not None else None


@dataclass
class SearchResult:
    task: SearchTask
    n: int
    raw: int
    solutions: list
    failures: list

    def summary(self) -> str:
        t = self.task
        line = f"d={t.d} k={t.k} n={self.n} solutions={len(self.solutions)} raw={self.raw}"
        if self.failures:
            line += f" failures={len(self.failures)}"
        return line


def evaluate(params: Params, m, deck, cache: dict | None = None) -> Solution:
    """Build K and its boundary, key the boundary and certify it.

    Certificates are isomorphism invariant, so ``cache`` (canonical key ->
    certificate) lets repeated classes skip the expensive checks.
    """
    from .assembly import boundary_of, build_from_deck
    from .certify import certify_tight
    from .isomorphism import canonical_key

    graph, trees, K = build_from_deck(params, m, deck)
    B, _ = boundary_of(K)
    key = canonical_key(B)
    cert = cache.get(key) if cache is not None else None
    if cert is None:
        cert = certify_tight(B, params.d, K.provenance())
        if cache is not None:
            cache[key] = cert
    return Solution(tuple(m), tuple(deck), key, cert.body_digest(), cert.verdict,
                    cert.betti1, cert.orientable)


def _run_branch(args):
    """Worker: evaluate every deck below the given m_0 values, in DFS order."""
    d, k, first, units_only = args
    params = Params(d, k)
    searcher = DeckSearcher(d, k)
    cache: dict = {}
    found, failures = [], []
    for m in enumerate_m_vectors(d, k, first=first, units_only=units_only):
        for deck in searcher.decks(m):
            try:
                found.append(evaluate(params, m, deck, cache))
            except Exception as exc:  # reported, never dropped silently
                log.error("candidate m=%s deck=%s failed: %s", m, deck, exc)
                failures.append((tuple(m), tuple(deck), f"{type(exc).__name__}: {exc}"))
    return found, failures


def _branches(task: SearchTask) -> list:
    if task.k == 0:
        return [None]
    return [frozenset([x]) for x in step_candidates(task.d, task.k, task.units_only) if x != 1]


def search(task: SearchTask) -> SearchResult:
    """Run the full search for ``(d, k)``.

    Work is split by the value of m_0; branch results are merged in DFS order,
    so the output does not depend on the number of workers.  With dedup, the
    first deck of every isomorphism class of boundaries is kept.  Solutions are
    returned sorted by canonical key.
    """
    params = Params(task.d, task.k)
    jobs = [(task.d, task.k, b, task.units_only) for b in _branches(task)]
    if task.jobs == 1 or len(jobs) == 1:
        parts = [_run_branch(j) for j in jobs]
    else:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=task.jobs) as pool:
            parts = list(pool.map(_run_branch, jobs))
    raw, failures, kept = 0, [], {}
    all_found = []
    for found, fails in parts:
        raw += len(found) + len(fails)
        failures.extend(fails)
        all_found.extend(found)
    for sol in all_found:
        if sol.verdict != "tight":
            failures.append((sol.m, sol.deck, f"certificate verdict {sol.verdict}"))
            log.error("candidate m=%s: certificate verdict %s", sol.m, sol.verdict)
            continue
        if task.dedup:
            kept.setdefault(sol.key, sol)
        else:
            kept[(sol.key, sol.m, sol.deck)] = sol
    solutions = [kept[k] for k in sorted(kept, key=_sort_key)]
    result = SearchResult(task, params.n, raw, solutions, failures)
    if task.out:
        write_solutions(result, task.out)
    return result


def _sort_key(k):
    if isinstance(k, bytes):
        return (k, (), ())
    key, m, deck = k
    return (key, m, tuple((p.sigma, p.tau) for p in deck))


def write_solutions(result: SearchResult, out_dir) -> list:
    """One ``.deck`` plus ``.fct`` files for K and its boundary per solution."""
    from pathlib import Path

    from .assembly import boundary_of, build_from_deck
    from .simplicial import write_fct
    from .spiderweb import write_deck

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = Params(result.task.d, result.task.k)
    written = []
    for idx, sol in enumerate(result.solutions, 1):
        stem = out / f"d{params.d}_k{params.k}_{idx:04d}"
        _, _, K = build_from_deck(params, sol.m, sol.deck)
        B, _ = boundary_of(K)
        comments = K.provenance() + [f"certificate {sol.certificate} verdict {sol.verdict}"]
        write_deck(stem.with_suffix(".deck"), params, sol.m, sol.deck, comments)
        write_fct(f"{stem}_K.fct", K.complex, comments)
        write_fct(f"{stem}_boundary.fct", B, comments)
        written.append(stem)
    with open(out / "summary.txt", "w", encoding="utf-8") as fh:
        fh.write(result.summary() + "\n")
    return written


# ---------------------------------------------------------------------------
# the infinite family with m = (d+2, 1)


@dataclass(frozen=True)
class FamilySpec:
    d: int
    beta: tuple
    alpha: tuple

    @property
    def m(self) -> tuple:
        return (self.d + 2, 1)

    @property
    def deck(self) -> tuple:
        # alpha drives the inward paths and beta the outward ones
        return (PermutationPair(self.alpha, self.beta),)


def family_count(d: int) -> int:
    """``2^(d-1) * floor(d/2)! * floor((d-1)/2)!``."""
    if d < 2:
        raise ValueError("need d >= 2")
    return 2 ** (d - 1) * factorial(d // 2) * factorial((d - 1) // 2)


def _paired_fillings(positions: list, values: list, total: int) -> list:
    """Assignments of ``values`` to ``positions`` with paired entries summing to ``total``.

    ``positions`` is a list of position pairs (a self-paired position appears
    as ``(p, p)``); returns dicts position -> value.
    """
    out = []

    def rec(i, free, acc):
        if i == len(positions):
            out.append(dict(acc))
            return
        p, q = positions[i]
        for v in sorted(free):
            w = total - v
            if p == q:
                if v == w:
                    acc[p] = v
                    rec(i + 1, free - {v}, acc)
                    del acc[p]
            elif w in free and w != v:
                acc[p], acc[q] = v, w
                rec(i + 1, free - {v, w}, acc)
                del acc[p], acc[q]

    rec(0, frozenset(values), {})
    return out


def family_specs(d: int) -> list:
    """All (beta, alpha) with beta = (0, d, b_2..b_d), alpha = (0, a_1..a_d),
    b_{i+1} + b_{d+1-i} = d and a_i + a_{d+1-i} = d + 1."""
    if d < 2:
        raise ValueError("need d >= 2")
    bpos = sorted({(min(j, d + 2 - j), max(j, d + 2 - j)) for j in range(2, d + 1)})
    apos = sorted({(min(i, d + 1 - i), max(i, d + 1 - i)) for i in range(1, d + 1)})
    specs = []
    for b in _paired_fillings(bpos, list(range(1, d)), d):
        beta = (0, d) + tuple(b[j] for j in range(2, d + 1))
        for a in _paired_fillings(apos, list(range(1, d + 1)), d + 1):
            alpha = (0,) + tuple(a[i] for i in range(1, d + 1))
            specs.append(FamilySpec(d, beta, alpha))
    return specs


def family_generate(d: int, build: bool = True) -> list:
    """Family members as ``(FamilySpec, Solution or None)``.

    Every member's deck is checked against the deck conditions; with ``build``
    the handlebody, its boundary, canonical key and certificate are computed.
    """
    params = Params(d, 1)
    cache: dict = {}
    out = []
    for spec in family_specs(d):
        report = deck_conditions(spec.deck, spec.m, params)
        if not report.ok:
            raise AssertionError(f"family member {spec} fails the deck conditions: {report.messages}")
        out.append((spec, evaluate(params, spec.m, spec.deck, cache) if build else None))
    return out
