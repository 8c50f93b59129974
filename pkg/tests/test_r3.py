import random

import pytest

from conftest import all_generators, decorate, global_sign
from khcob import BraidWord, Chain, MovieEvent, closure, homology
from khcob.r3 import TABLE_WORDS, VARIANTS, r3_map, table_path, variant_table
from khcob.simplify import r3_moves

TABLES = [(name, v) for name in TABLE_WORDS for v in VARIANTS]


@pytest.mark.parametrize("name, variant", TABLES)
def test_golden_table(name, variant):
    shipped = table_path(name, variant).read_text()
    body = "".join(line + "\n" for line in shipped.splitlines() if not line.startswith("#"))
    assert variant_table(TABLE_WORDS[name], variant) == body


@pytest.mark.parametrize("name, variant", TABLES)
def test_table_map_is_a_chain_map(name, variant):
    d = closure(BraidWord(3, TABLE_WORDS[name]))
    m = r3_map(d, (0, 1, 2), variant)
    assert global_sign(m) is not None
    for s, l in all_generators(d):
        m(Chain.generator(d, s, l))


@pytest.mark.parametrize("name", list(TABLE_WORDS))
def test_variants_agree_on_homology(name):
    d = closure(BraidWord(3, TABLE_WORDS[name]))
    post = r3_map(d, (0, 1, 2), "over").post
    assert {k: r for k, (r, _) in homology(post).groups.items()} == \
        {k: r for k, (r, _) in homology(d).groups.items()}


def test_random_triangles_give_chain_maps():
    rng = random.Random(5)
    done = 0
    while done < 12:
        n = rng.randint(3, 4)
        letters = [rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(3, 6))]
        d = decorate(rng, closure(BraidWord(n, tuple(letters))), 7)
        for ev in r3_moves(d):
            for variant in VARIANTS:
                post, m = MovieEvent("r3", ev.site, (("variant", variant),)).build(d)
                assert global_sign(m) is not None
            done += 1


def test_unknown_variant():
    d = closure(BraidWord(3, (1, 2, 1)))
    with pytest.raises(Exception):
        r3_map(d, (0, 1, 2), "sideways")
