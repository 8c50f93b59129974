import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_generators, random_diagram
from oracles import diagram_jones
from khcob import (Bigrading, BraidWord, BudgetExceeded, Chain, Diagram, LabeledSmoothing,
                   classes_agree_up_to_sign, closure, differential, format_chain,
                   graded_euler_characteristic, grading, homology, is_boundary, is_cycle,
                   parse_chain, parse_diagram)
from khcob import planar
from khcob.bracket import unnormalized_jones
from khcob.complex import (d_squared_defects, differential_operator, differential_terms,
                           format_groups, grading_of)

EMPTY = Diagram([], [])
UNKNOT0 = parse_diagram("crossings 0\nloop 1\n")
TREFOIL = closure(BraidWord(2, (1, 1, 1)))


def test_gradings_of_a_generator():
    # trefoil, all-0 smoothing, both loops labeled x: h = 0, q = -2 + 0 + 3
    d = TREFOIL
    n = len(d.resolve(0))
    assert grading_of(d, 0, (1 << n) - 1) == Bigrading(0, 3 - n)
    g = LabeledSmoothing.of(d, 0b111, 0)
    assert grading(d, g) == Bigrading(3, len(d.resolve(7)) + 3 + 3)


def test_zero_coefficients_are_dropped():
    c = Chain(TREFOIL, {(0, 0): 2, (0, 1): 0})
    assert len(c) == 1
    assert not (c - c)
    assert (c + c).terms == {(0, 0): 4}


def test_chain_text_round_trip():
    d = TREFOIL
    c = Chain(d, {(0, 1): 3, (5, 0): -1})
    assert parse_chain(d, format_chain(c)) == c
    assert parse_chain(d, "0") == Chain(d, {})


def test_chain_text_rejects_bad_length():
    with pytest.raises(Exception) as err:
        parse_chain(TREFOIL, "1 * [01 | 1:x]")
    assert "bits" in str(err.value)


def test_differential_of_unknot_generator_is_zero():
    assert not differential(UNKNOT0, Chain.generator(UNKNOT0, 0, 1))


def test_d_squared_on_every_generator(rng):
    for _ in range(30):
        d = random_diagram(rng, 7)
        assert d_squared_defects(d) == []
        for s, l in all_generators(d):
            c = Chain.generator(d, s, l)
            assert not differential(d, differential(d, c))


def test_operator_matches_generator_formula(rng):
    for _ in range(15):
        d = random_diagram(rng, 6)
        m, offsets = differential_operator(d)
        for s, l in all_generators(d):
            row = m.getrow(offsets[s] + l).tocoo()
            got = {}
            for idx, v in zip(row.col, row.data):
                t = max(k for k, o in enumerate(offsets) if o <= idx)
                got[t, int(idx) - offsets[t]] = int(v)
            want = differential(d, Chain.generator(d, s, l)).terms
            assert {k: v for k, v in got.items() if v} == dict(want)


def test_differential_bidegree(rng):
    for _ in range(20):
        d = random_diagram(rng, 6)
        for s, l in all_generators(d):
            g = grading_of(d, s, l)
            for (t, m), _ in differential_terms(d, s, l):
                assert grading_of(d, t, m) == Bigrading(g.h + 1, g.q)


def test_cycle_criterion_matches_differential(rng):
    for _ in range(20):
        d = random_diagram(rng, 6)
        for s, l in all_generators(d):
            assert is_cycle(d, (s, l)) == (not differential(d, Chain.generator(d, s, l)))


def test_euler_small_examples():
    assert graded_euler_characteristic(EMPTY) == {0: 1}
    assert graded_euler_characteristic(UNKNOT0) == {-1: 1, 1: 1}
    assert graded_euler_characteristic(TREFOIL) == unnormalized_jones(TREFOIL)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_euler_matches_both_oracles(seed):
    d = random_diagram(random.Random(seed), 8)
    chi = graded_euler_characteristic(d)
    assert chi == diagram_jones(d)
    assert chi == unnormalized_jones(d)


def test_homology_examples():
    g = homology(UNKNOT0)
    assert {(k.h, k.q): r for k, (r, _) in g.groups.items()} == {(0, -1): 1, (0, 1): 1}
    assert homology(EMPTY).rank(0, 0) == 1
    t = homology(TREFOIL)
    assert t.euler() == unnormalized_jones(TREFOIL)
    assert t.torsion(3, 7) == [2]
    assert [(k.h, k.q) for k, (r, _) in t.groups.items() if r] == [(0, 1), (0, 3), (2, 5), (3, 9)]


def test_homology_window_and_format():
    t = homology(TREFOIL, ((0, 0), (1, 3)))
    assert {(k.h, k.q) for k in t.groups} == {(0, 1), (0, 3)}
    assert format_groups(t).splitlines() == ["(0,1) 1", "(0,3) 1"]


def test_budget_reports_state_count():
    d = closure(BraidWord(2, (1,) * 5))
    with pytest.raises(BudgetExceeded) as err:
        homology(d, budget=4)
    assert err.value.states == 32
    assert "32" in str(err.value)


def test_reidemeister_invariance_of_ranks(rng):
    for _ in range(6):
        d = random_diagram(rng, 6)
        base = homology(d)
        arc = rng.choice(sorted(d.arcs))
        for sign in (1, -1):
            kinked = planar.add_kink(d, arc, sign).post
            assert {k: r for k, (r, _) in homology(kinked).groups.items()} == \
                {k: r for k, (r, _) in base.groups.items()}


def test_classes_up_to_sign():
    d = TREFOIL
    c = Chain.generator(d, 0, (1 << len(d.resolve(0))) - 1)
    assert classes_agree_up_to_sign(d, c, c)
    assert classes_agree_up_to_sign(d, c, -1 * c)
    assert not classes_agree_up_to_sign(d, c, 2 * c)


def test_boundaries_are_recognised(rng):
    d = random_diagram(rng, 5)
    for s, l in list(all_generators(d))[:20]:
        b = differential(d, Chain.generator(d, s, l))
        if b:
            assert is_boundary(d, b)
