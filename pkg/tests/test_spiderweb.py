from __future__ import annotations

from itertools import permutations
from math import comb

import pytest

from tighttri.spiderweb import (
    DeckError,
    DeckParseError,
    Params,
    PermutationPair,
    TreetypeDecodeError,
    admissible_step,
    build_tree,
    check_m_vector,
    deck_conditions,
    format_deck,
    make_deck,
    make_graph,
    parse_deck,
    permutation_sign,
    permutations_from_treetype,
    read_deck,
    span,
    treetype,
    trees_intersect,
    vertex_count,
    write_deck,
)

from conftest import REFERENCE, reference_input


@pytest.mark.parametrize("d,k,n", [(2, 0, 7), (3, 0, 9), (2, 1, 19), (3, 1, 29), (3, 2, 49), (4, 1, 41),
                                   (5, 1, 55), (2, 4, 55)])
def test_vertex_count(d, k, n):
    assert vertex_count(d, k) == n == Params(d, k).n


def test_graph_edge_count():
    params = Params(3, 2)
    g = make_graph(params, (41, 20, 1))
    n = params.n
    # k+1 orbit cycles and (d+1)k radial steps per angle
    assert len(g.edges) == (params.k + 1) * n + (params.d + 1) * params.k * n == 539
    assert g.n_vertices == n * params.rings


def test_graph_is_rotation_invariant():
    g = make_graph(Params(3, 1), (12, 1))
    rotated = {tuple(sorted((g.rotate(a), g.rotate(b)))) for a, b in g.edges}
    assert rotated == set(g.edges)


def test_orbit_cycle_steps():
    g = make_graph(Params(3, 1), (12, 1))
    cyc = g.orbit_cycle(0)
    assert len(set(cyc)) == 29
    assert all(tuple(sorted((a, b))) in g.edges for a, b in zip(cyc, cyc[1:] + cyc[:1]))


def test_m_vector_validation():
    params = Params(3, 1)
    with pytest.raises(DeckError):
        check_m_vector((12,), params)
    with pytest.raises(DeckError):
        check_m_vector((1, 1), params)
    p55 = Params(2, 4)
    assert admissible_step(5, 2, 55)
    assert not admissible_step(11, 2, 55)
    check_m_vector((4, 16, 5, 46, 1), p55)
    with pytest.raises(DeckError):
        check_m_vector((4, 16, 5, 46, 1), p55, units_only=True)
    with pytest.raises(DeckError):
        check_m_vector((0, 1), Params(2, 1))


def test_treetype_example():
    S = treetype((1, 2, 0, 3), (1, 0, 3, 2))
    assert S == {(1, 3), (2, 3), (2, 4), (4, 1), (4, 3), (4, 4)}


def test_treetype_decodes_back():
    assert permutations_from_treetype({(1, 3), (2, 3), (2, 4), (4, 1), (4, 3), (4, 4)}, 3) == \
        ((1, 2, 0, 3), (1, 0, 3, 2))


def test_treetype_size_exhaustive_small_d():
    for d in (1, 2, 3):
        for s in permutations(range(d + 1)):
            for t in permutations(range(d + 1)):
                S = treetype(s, t)
                assert len(S) == comb(d + 1, 2)
                assert permutations_from_treetype(S, d) == (s, t)


def test_treetype_decode_errors():
    with pytest.raises(TreetypeDecodeError):
        permutations_from_treetype({(1, 1)}, 2)
    with pytest.raises(TreetypeDecodeError):
        permutations_from_treetype({(5, 1)}, 2)


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1


def test_pair_validation():
    with pytest.raises(DeckError):
        PermutationPair((0, 1, 1), (0, 1, 2))
    with pytest.raises(DeckError):
        PermutationPair((0, 1), (0, 1, 2))
    assert PermutationPair((1, 0, 2), (2, 1, 0)).type == (1, 2)


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_table_decks_pass_conditions(name):
    params, m, deck, _ = reference_input(name)
    report = deck_conditions(deck, m, params, verify_trees=True)
    assert report.ok and report.trees_ok, report.messages
    assert span(deck, m, params).full


def test_span_of_published_example_is_full():
    params, m, deck, _ = reference_input("M4_21")
    sp = span(deck, m, params)
    assert sp.elements == frozenset(range(49))


def test_conditions_detect_failures():
    params = Params(3, 1)
    bad_last = make_deck([((2, 1, 3, 0), (1, 2, 0, 3))])
    rep = deck_conditions(bad_last, (12, 1), params)
    assert not rep.last_entries_ok and not rep.ok
    params2, m2, deck2, _ = reference_input("M4_21")
    # make tau_2 and sigma_1 vanish at the same position
    broken = (deck2[0], PermutationPair(deck2[1].sigma, (1, 2, 0, 3)))
    rep2 = deck_conditions(broken, m2, params2)
    assert not rep2.adjacent_ok
    with pytest.raises(DeckError):
        deck_conditions(deck2[:1], m2, params2)


def test_wrong_m_breaks_span():
    params, _, deck, _ = reference_input("M4_15")
    assert not deck_conditions(deck, (2, 1), params).span_full


@pytest.mark.parametrize("name", ["M4_15", "M4_21", "M5_11"])
def test_tree_shape(name):
    params, m, deck, _ = reference_input(name)
    g = make_graph(params, m)
    for j in (0, 1, params.n - 1):
        t = build_tree(j, deck, m, g)
        assert len(t.vertices) == params.n - params.d - 1
        assert len(t.edges) == len(t.vertices) - 1
        deg = {u: 0 for u in t.vertices}
        for a, b in t.edges:
            deg[a] += 1
            deg[b] += 1
        assert all(g.degree(u) - deg[u] <= 1 for u in t.vertices)


def test_trees_intersect_at_m_offsets():
    params, m, deck, _ = reference_input("M4_21")
    for mi in m:
        assert trees_intersect(deck, m, mi, params)
    assert all(trees_intersect(deck, m, j, params) for j in range(params.n))


def test_deck_round_trip(tmp_path):
    params, m, deck, _ = reference_input("M4_21")
    path = tmp_path / "x.deck"
    write_deck(path, params, m, deck, ["example"])
    p2, m2, deck2 = read_deck(path)
    assert (p2, m2, deck2) == (params, m, deck)


def test_deck_format_normalizes_last_entry():
    params = Params(3, 1)
    text = format_deck(params, (12 * 2 % 29, 2), make_deck([((2, 0, 1, 3), (1, 2, 0, 3))]))
    assert "m 12 1" in text


@pytest.mark.parametrize("text,line", [
    ("d 3\nk 1\nm 12 1\nsigma 1 2 0 1\n", 4),
    ("d 3\nk 1\nm 12 x\n", 3),
    ("sigma 1 2 0 1 3\n", 1),
    ("d 3\nk 1\nm 12 1\nsigma 2 2 0 1 3\n", 4),
    ("d 3\nk 1\nfoo 1\n", 3),
])
def test_deck_parse_errors_report_line(text, line):
    with pytest.raises(DeckParseError) as exc:
        parse_deck(text)
    assert exc.value.line == line


def test_deck_parse_missing_pairs():
    with pytest.raises(DeckParseError):
        parse_deck("d 3\nk 1\nm 12 1\nsigma 1 2 0 1 3\n")
