import random

import pytest

from conftest import random_word
from khcob import (Chain, MovieError, band_movie, closure, cycles_at, differential, distinguish,
                   grading, heuristic_filter, is_cycle, orientation_induced_generator, slice_bands)
from khcob import corpus
from khcob.search import CandidateStream, Certificate, target_of


@pytest.fixture(scope="module")
def m946():
    e = corpus.load("m9_46")
    return e.diagram, e.movie("A"), e.movie("B")


def test_orientation_induced_generator_is_a_cycle():
    rng = random.Random(2)
    for _ in range(20):
        d = closure(random_word(rng))
        g = orientation_induced_generator(d)
        assert is_cycle(d, g)
        assert grading(d, g).h == 0


def test_cycles_at_are_cycles_in_the_grading(m946):
    d, a, _ = m946
    t = target_of(a)
    found = cycles_at(d, t)
    assert found
    for s, l in found:
        c = Chain.generator(d, s, l)
        assert c.gradings() == {t}
        assert not differential(d, c)


def test_cycles_at_out_of_range(m946):
    d, a, _ = m946
    assert cycles_at(d, type(target_of(a))(99, 0)) == []


def test_distinguish_finds_a_verified_certificate(m946):
    d, a, b = m946
    cert = distinguish(d, a, b)
    assert cert is not None and cert.verify()
    assert {abs(cert.value_a), abs(cert.value_b)} == {0, 1}
    text = cert.text()
    assert text.startswith("certificate\n") and "value-a" in text and text.endswith("end\n")


def test_tampered_certificate_fails(m946):
    d, a, b = m946
    cert = distinguish(d, a, b)
    bad = Certificate(cert.chain, a, b, cert.value_a + 1, cert.value_b)
    assert not bad.verify()


def test_identical_movies_give_nothing(m946):
    d, a, _ = m946
    assert distinguish(d, a, a, budget=50) is None


def test_distinguish_checks_endpoints(m946):
    d, a, b = m946
    with pytest.raises(MovieError):
        distinguish(closure(random_word(random.Random(1))), a, b)


def test_budget_sets_exhausted(m946):
    d, a, _ = m946
    n = len(cycles_at(d, target_of(a)))
    full = CandidateStream(d, target_of(a), n)
    assert len(list(full)) == n and not full.exhausted
    short = CandidateStream(d, target_of(a), n - 1)
    assert len(list(short)) == n - 1 and short.exhausted


def test_heuristic_filter():
    allowed = heuristic_filter(lambda s: s == 5, 1, 0)
    assert allowed(5, 0)                # incompatible
    assert allowed(0b10, 0)             # disoriented at crossing 1
    assert not allowed(0b01, 0)


def test_slice_bands_cap_off(m946):
    d, _, _ = m946
    bands = slice_bands(d)
    assert (1, 5) in bands and (1, 11) in bands
    for p, q in bands[:3]:
        m = band_movie(d, p, q)
        assert m.chi == 1 and not m.target.n and not m.target.loops
