from __future__ import annotations

from functools import lru_cache

from tighttri.assembly import boundary_of, build_from_deck
from tighttri.spiderweb import Params, make_deck

# (d, k, m, deck as [(sigma_i, tau_i) for i = 1..k], published orbit representatives)
REFERENCE = {
    "M4_15": (3, 1, (12, 1), [((2, 0, 1, 3), (1, 2, 0, 3))],
              [(0, 1, 2, 3, 4), (0, 1, 3, 4, 19), (0, 1, 4, 19, 24), (0, 4, 12, 19, 24), (0, 5, 10, 17, 22)]),
    "M4_21": (3, 2, (41, 20, 1), [((1, 2, 0, 3), (1, 0, 3, 2)), ((1, 0, 2, 3), (0, 2, 1, 3))],
              [(0, 1, 2, 3, 4), (0, 1, 3, 4, 31), (0, 1, 28, 37, 46), (0, 4, 11, 31, 40), (0, 9, 18, 29, 38),
               (0, 6, 15, 24, 41), (0, 6, 16, 24, 41), (0, 8, 16, 24, 32), (0, 5, 11, 20, 29)]),
    "M4_31": (3, 3, (64, 25, 8, 1),
              [((1, 0, 2, 3), (3, 1, 0, 2)), ((3, 2, 0, 1), (3, 2, 0, 1)), ((0, 2, 3, 1), (0, 3, 2, 1))],
              [(0, 1, 2, 3, 4), (0, 1, 2, 14, 67), (0, 1, 14, 22, 67), (0, 3, 16, 24, 32), (0, 6, 25, 31, 50),
               (0, 5, 11, 30, 36), (0, 5, 11, 36, 54), (0, 8, 16, 24, 32), (0, 7, 44, 52, 60), (0, 8, 16, 25, 50),
               (0, 6, 25, 44, 52), (0, 5, 10, 41, 59), (0, 5, 10, 15, 20)]),
    "M5_11": (4, 1, (6, 1), [((0, 1, 2, 3, 4), (0, 4, 3, 2, 1))],
              [(0, 1, 2, 3, 4, 5), (0, 1, 2, 3, 10, 39), (0, 1, 2, 9, 15, 38), (0, 1, 8, 14, 20, 37),
               (0, 5, 12, 18, 24, 30), (0, 6, 12, 18, 24, 30)]),
    "M5_21": (4, 2, (44, 8, 1), [((1, 2, 0, 3, 4), (0, 2, 4, 1, 3)), ((0, 3, 1, 4, 2), (0, 4, 3, 2, 1))],
              [(0, 1, 2, 3, 4, 5), (0, 1, 2, 3, 14, 69), (0, 1, 12, 20, 67, 69), (0, 2, 4, 16, 24, 32),
               (0, 4, 16, 24, 32, 40), (0, 7, 16, 32, 40, 61), (0, 7, 17, 32, 40, 61), (0, 6, 27, 37, 44, 54),
               (0, 7, 17, 34, 44, 61), (0, 8, 16, 24, 32, 40), (0, 8, 16, 32, 40, 61)]),
    "M6_165": (5, 1, (16, 1), [((3, 0, 4, 5, 1, 2), (1, 2, 4, 0, 5, 3))],
               [(0, 1, 2, 3, 4, 5, 6), (0, 1, 2, 3, 22, 52, 53), (0, 1, 3, 4, 6, 25, 48),
                (0, 1, 3, 4, 25, 41, 48), (0, 1, 22, 29, 38, 45, 52), (0, 4, 16, 25, 32, 41, 48),
                (0, 7, 14, 23, 30, 39, 46)]),
}


def reference_input(name):
    d, k, m, deck, reps = REFERENCE[name]
    return Params(d, k), m, make_deck(deck), reps


@lru_cache(maxsize=None)
def built(name):
    """(params, m, deck, graph, trees, K, boundary) for a table entry."""
    params, m, deck, _ = reference_input(name)
    graph, trees, K = build_from_deck(params, m, deck)
    B, _ = boundary_of(K)
    return params, m, deck, graph, trees, K, B


@lru_cache(maxsize=None)
def base_case(d):
    """The k = 0 construction: the (2d+3)-vertex handlebody and its boundary."""
    params = Params(d, 0)
    graph, trees, K = build_from_deck(params, (1,), ())
    B, _ = boundary_of(K)
    return K.complex, B


# lines reported by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
