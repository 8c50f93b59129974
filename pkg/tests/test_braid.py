import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_generators, random_factorization, random_relation, random_word
from oracles import diagram_jones
from khcob import (Band, BandFactorization, BraidError, BraidWord, Chain, RewriteStep, artin_action,
                   braid_equal, classes_agree_up_to_sign, closure, compile_braided_surface,
                   evaluate_movie, grading, homology, is_compatible, is_cycle, parse_script,
                   positive_stabilize, psi, psi_chain, resolve_crossing_event, rewrite_movie,
                   rewrite_tracked, twist_family)
from khcob.braid import apply_step, stabilization_movie
from khcob.complex import Bigrading, d_squared_defects

FIG_LEFT = "strands 3\n[ -1 -1 ; 2 ; + ]\n[ 1 ; 2 ; + ]\n[ ; 2 ; + ]\n[ ; 2 ; + ]\n"
RIGHT_WORD = (-1, -1, -1, 2, 1, 1, 1, 2, 1, -2, -2, -2, 1, 2, 2, 2)
SCRIPT = "mixed 11\nmixed 2\ninsert 6 2\nmixed 4\nmixed 7\ncancel 6\ncancel 7\ncancel 6\ncancel 5\n"


def test_word_basics():
    b = BraidWord.parse("strands 3\n1 -2 1\n")
    assert b.strands == 3 and b.writhe == 1
    assert b.inverse().letters == (-1, 2, -1)
    assert BraidWord.parse(b.text()) == b
    with pytest.raises(BraidError) as err:
        BraidWord.parse("strands 3\n1 x\n")
    assert err.value.line == 2


def test_closure_is_a_valid_diagram():
    d = closure(BraidWord(3, (1, -2, 1, 2)))
    assert d.n == 4 and d.oriented
    assert d_squared_defects(d) == []


def test_psi_bigrading_and_cycle():
    rng = random.Random(3)
    for _ in range(30):
        b = random_word(rng)
        g = psi(b)
        assert is_cycle(closure(b), g)
        # q equals the self-linking number, writhe minus strands
        assert grading(closure(b), g) == Bigrading(0, b.writhe - b.strands)


def test_psi_smoothing_is_oriented():
    b = BraidWord(3, (1, -2, 1, -2))
    assert psi(b).smoothing.bits == (0, 1, 0, 1)


def test_artin_action_detects_relations():
    assert braid_equal(BraidWord(3, (1, 2, 1)), BraidWord(3, (2, 1, 2)))
    assert braid_equal(BraidWord(3, (1, -1)), BraidWord(3, ()))
    assert not braid_equal(BraidWord(3, (1, 2)), BraidWord(3, (2, 1)))
    assert artin_action(BraidWord(2, ())) == ((1,), (2,))


def test_relations_checked_by_artin_action():
    rng = random.Random(9)
    for _ in range(20):
        w, step = random_relation(rng)
        letters, _ = apply_step(w.letters, step)
        assert braid_equal(w, BraidWord(w.strands, letters))
    with pytest.raises(BraidError):
        apply_step((1, 1, 2), RewriteStep("braid", 0))


def test_factorization_parse_and_roles():
    f = BandFactorization.parse(FIG_LEFT)
    assert f.word().letters == (-1, -1, 2, 1, 1, 1, 2, -1, 2, 2)
    assert f.chi == -1
    assert f.cores() == [2, 6, 8, 9]
    assert f.pairs() == [(1, 3), (0, 4), (5, 7)]
    assert BandFactorization.parse(f.text()) == f
    with pytest.raises(BraidError):
        BandFactorization.parse("[ ; 1 ; + ]\n")
    with pytest.raises(BraidError):
        BandFactorization.parse("strands 2\n[ ; 2 ; + ]\n")


def test_compile_census_and_chi():
    f = BandFactorization.parse(FIG_LEFT)
    m = compile_braided_surface(f)
    assert m.chi == f.chi
    assert m.census() == {"saddle": 4, "r1+": 4, "r2-": 3, "death": 3}
    assert not m.target.n and not m.target.loops


def test_compiled_movie_on_psi_positive_bands():
    rng = random.Random(4)
    for _ in range(10):
        f = random_factorization(rng, 8, positive=True)
        v = evaluate_movie(compile_braided_surface(f), psi_chain(f.word())).scalar()
        assert abs(v) == 1


def test_incompatible_generators_die():
    rng = random.Random(8)
    for _ in range(8):
        f = random_factorization(rng, 7)
        m = compile_braided_surface(f)
        d = m.source
        for s, l in all_generators(d):
            bits = tuple((s >> i) & 1 for i in range(d.n))
            if not is_compatible(bits, f):
                assert not evaluate_movie(m, Chain.generator(d, s, l))


def test_compatibility_definition():
    f = BandFactorization.parse("strands 3\n[ 1 ; 2 ; + ]\n")
    # letters 1 2 -1: the core must be oriented, the pair jointly (dis)oriented
    assert is_compatible((0, 0, 1), f)
    assert is_compatible((1, 0, 0), f)
    assert not is_compatible((0, 1, 1), f)
    assert not is_compatible((0, 0, 0), f)


def test_example_rewrite_tracks_the_core():
    rw = rewrite_tracked(BraidWord(3, RIGHT_WORD), parse_script(SCRIPT))
    assert rw.result.letters == (-1, -1, 2, 1, 1, 1, 2, -1, 2, 2)
    assert rw.tracking()[3] == 3
    assert rw.result.letters[3] == 1


def test_rewrite_rejects_bad_steps():
    with pytest.raises(BraidError) as err:
        rewrite_tracked(BraidWord(3, (1, 2)), [RewriteStep("cancel", 0)])
    assert "step 1" in str(err.value)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_psi_transported_through_relation(seed):
    w, step = random_relation(random.Random(seed), 4, 8)
    rw = rewrite_tracked(w, [step])
    out = evaluate_movie(rewrite_movie(rw), psi_chain(w))
    assert classes_agree_up_to_sign(out.diagram, out, psi_chain(rw.result))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_psi_through_stabilization(seed):
    b = random_word(random.Random(seed), 3, 6)
    m = stabilization_movie(b)
    out = evaluate_movie(m, psi_chain(positive_stabilize(b)))
    assert classes_agree_up_to_sign(m.target, out, psi_chain(b))


def test_twist_family_identity_at_zero():
    base = BraidWord(3, (1, 2))
    assert twist_family(base, [(0, 1), (1, 2)], [0, 0]) == base


def test_twist_family_at_one_one():
    # one full twist in each region: the closure of 1^3 2^3, a sum of two trefoils
    got = twist_family(BraidWord(3, (1, 2)), [(0, 1), (1, 2)], [1, 1])
    assert got.letters == (1, 1, 1, 2, 2, 2)
    trefoil = diagram_jones(closure(BraidWord(2, (1, 1, 1))))
    square = {}
    for a, x in trefoil.items():
        for b, y in trefoil.items():
            square[a + b] = square.get(a + b, 0) + x * y
    # unnormalized Jones of a connected sum: product divided by (q + 1/q)
    prod = diagram_jones(closure(got))
    times = {}
    for a, x in prod.items():
        for b in (-1, 1):
            times[a + b] = times.get(a + b, 0) + x
    assert {k: v for k, v in times.items() if v} == {k: v for k, v in square.items() if v}


def test_twist_family_torus_knot():
    got = twist_family(BraidWord(2, (1,)), [(0, 1), (1, 1)], [1, 1])
    ranks = {(k.h, k.q): r for k, (r, _) in homology(closure(got)).groups.items() if r}
    assert ranks == {(0, 3): 1, (0, 5): 1, (2, 7): 1, (3, 11): 1, (4, 11): 1, (5, 15): 1}


def test_twist_family_errors():
    with pytest.raises(BraidError):
        twist_family(BraidWord(2, (1,)), [(0, 1)], [1, 1])
    with pytest.raises(BraidError):
        twist_family(BraidWord(2, (1,)), [(0, 2)], [1])


def test_positive_resolution_sends_psi_to_psi_on_the_nose():
    rng = random.Random(12)
    for _ in range(30):
        b = random_word(rng)
        for k, x in enumerate(b.letters):
            if x < 0:
                continue
            out = evaluate_movie(resolve_crossing_event(closure(b), k), psi_chain(b))
            t = out.diagram
            state = t.oriented_smoothing().mask
            assert out.terms == {(state, (1 << len(t.resolve(state))) - 1): 1}
