import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_diagram
from khcob import BraidWord, Diagram, DiagramError, Smoothing, closure, emit_diagram, parse_diagram
from khcob import planar
from khcob.diagram import crossing_counts, oriented_smoothing

TREFOIL = """\
# right-handed trefoil
crossings 3
+ 1 5 2 4
+ 3 1 4 6
+ 5 3 6 2
"""


def test_counts_on_small_examples():
    assert crossing_counts(Diagram([], [])) == (0, 0)
    assert crossing_counts(closure(BraidWord(3, (1, 2)))) == (2, 0)
    # the quasipositive word used for the braided-surface example
    word = BraidWord(3, (-1, -1, 2, 1, 1, 1, 2, -1, 2, 2))
    assert crossing_counts(closure(word)) == (7, 3)


def test_oriented_smoothing_follows_signs():
    assert oriented_smoothing(closure(BraidWord(3, (1, 2, 1)))).bits == (0, 0, 0)
    assert oriented_smoothing(closure(BraidWord(2, (-1,)))).bits == (1,)
    word = (-1, -1, 2, 1, 1, 1, 2, -1, 2, 2)
    bits = oriented_smoothing(closure(BraidWord(3, word))).bits
    assert bits == tuple(int(g < 0) for g in word)


def test_parse_reads_trefoil():
    d = parse_diagram(TREFOIL)
    assert d.n == 3 and d.signs == (1, 1, 1)
    assert len(d.components()) == 1


def test_round_trip_is_exact():
    d = parse_diagram(TREFOIL)
    assert parse_diagram(emit_diagram(d)) == d
    assert emit_diagram(parse_diagram(emit_diagram(d))) == emit_diagram(d)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_random(seed):
    d = random_diagram(random.Random(seed), 8)
    assert parse_diagram(emit_diagram(d)) == d


@pytest.mark.parametrize("text, line", [
    ("crossings 2\n+ 1 2 3 4\n", 1),
    ("+ 1 2 3 4\n", 1),
    ("crossings 1\n+ 1 2 3\n", 2),
    ("crossings 1\n* 1 1 2 2\n", 2),
    ("crossings 1\n+ 1 1 2 x\n", 2),
])
def test_parse_errors_carry_positions(text, line):
    with pytest.raises(DiagramError) as err:
        parse_diagram(text)
    assert err.value.line == line


def test_arc_used_three_times_is_rejected():
    with pytest.raises(DiagramError):
        parse_diagram("crossings 2\n+ 1 1 2 3\n+ 1 3 4 4\n")


def test_crossingless_loops_are_kept():
    d = parse_diagram("crossings 0\nloop 4\nloop 9\n")
    assert set(d.loops) == {4, 9}
    assert len(d.resolve(0)) == 2


def test_resolve_all_states_and_single_flips(rng):
    for _ in range(20):
        d = random_diagram(rng, 7)
        for s in range(1 << d.n):
            k = len(d.resolve(s))
            for i in range(d.n):
                assert abs(len(d.resolve(s ^ (1 << i))) - k) == 1


def test_resolve_is_stable():
    d = parse_diagram(TREFOIL)
    a = d._resolve(5)
    b = parse_diagram(TREFOIL).resolve(5)
    assert a == b


def test_tracing_flags():
    d = parse_diagram(TREFOIL)
    loops = d.resolve(0)
    assert all(loops.zero_tracing) and not any(loops.one_tracing)


def test_smoothing_length_checked():
    d = parse_diagram(TREFOIL)
    with pytest.raises(DiagramError):
        d.resolve(Smoothing((0, 1)))
    with pytest.raises(DiagramError):
        d.resolve(1 << 3)


def test_mirror_flips_every_sign():
    d = parse_diagram(TREFOIL)
    assert planar.mirror(d).signs == (-1, -1, -1)
    assert planar.mirror(planar.mirror(d)) == d
