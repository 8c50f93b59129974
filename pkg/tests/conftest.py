from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from khcob import BraidWord, Chain, closure, differential  # noqa: E402
from khcob import planar  # noqa: E402
from khcob.diagram import DiagramError  # noqa: E402


def random_word(rng: random.Random, max_strands: int = 4, max_len: int = 8) -> BraidWord:
    n = rng.randint(2, max_strands)
    letters = tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(1, max_len)))
    return BraidWord(n, letters)


def decorate(rng: random.Random, d, budget: int):
    """Add kinks and finger moves until ``budget`` crossings would be exceeded."""
    for _ in range(rng.randint(0, 3)):
        arcs = sorted(d.arcs)
        if rng.random() < 0.5 and d.n + 1 <= budget:
            d = planar.add_kink(d, rng.choice(arcs), rng.choice((1, -1)),
                                rng.choice(("under", "over"))).post
        elif d.n + 2 <= budget and len(arcs) > 1:
            a, b = rng.sample(arcs, 2)
            try:
                d = planar.add_bigon(d, a, b).post
            except DiagramError:
                pass
    return d


def random_diagram(rng: random.Random, max_crossings: int = 10):
    """A braid closure, sometimes mirrored, with a few kinks and bigons added."""
    while True:
        w = random_word(rng, 4, max(1, max_crossings - 2))
        d = closure(w)
        if rng.random() < 0.3:
            d = planar.mirror(d)
        d = decorate(rng, d, max_crossings)
        if d.n <= max_crossings:
            return d


def all_generators(d):
    for s in range(1 << d.n):
        for l in range(1 << len(d.resolve(s))):
            yield s, l


def global_sign(m, probe=None):
    """The sign with m.d = sign * d.m on every probed generator (1 if all vanish), or None."""
    d0, d1 = m.pre, m.post
    sign = 0
    for s, l in probe if probe is not None else all_generators(d0):
        c = Chain.generator(d0, s, l)
        a = m(differential(d0, c), check=False)
        b = differential(d1, m(c, check=False))
        if a == b and a == -1 * b:
            continue
        got = 1 if a == b else -1 if a == -1 * b else None
        if got is None or (sign and got != sign):
            return None
        sign = got
    return sign or 1


@pytest.fixture
def rng():
    return random.Random(20240611)


def elementary_events(d, rng: random.Random):
    """One or more valid events of every kind that has a site on ``d``."""
    from khcob import MovieEvent
    from khcob.simplify import r3_moves, shrinking_moves

    arcs = sorted(d.arcs)
    out = [MovieEvent("birth", ())]
    if arcs:
        out.append(MovieEvent("birth", (d.next_arc_id() + 3,)))
        out.append(MovieEvent("dot", (rng.choice(arcs),)))
        for kind in ("r1+inv", "r1-inv"):
            for side in ("under", "over"):
                out.append(MovieEvent(kind, (rng.choice(arcs),), (("side", side),)))
    out += [MovieEvent("death", (k,)) for k in d.loops]
    if d.oriented:
        for p in arcs:
            out.append(MovieEvent("saddle", (p, p)))
            break
        pairs = [(p, q) for i, p in enumerate(arcs) for q in arcs[i + 1:]
                 if p in d.loops or q in d.loops or planar.face_match(d, p, q)]
        out += [MovieEvent("saddle", pq) for pq in rng.sample(pairs, min(3, len(pairs)))]
    out += list(shrinking_moves(d))
    for ev in r3_moves(d):
        out.append(ev)
        out.append(MovieEvent("r3", ev.site, (("variant", "under"),)))
    for _ in range(3):
        if len(arcs) < 2:
            break
        a, b = rng.sample(arcs, 2)
        ev = MovieEvent("r2+", (a, b))
        try:
            ev.build(d)
        except DiagramError:
            continue
        out.append(ev)
    return out


def random_factorization(rng: random.Random, max_letters: int = 8, positive: bool = False):
    from khcob import Band, BandFactorization

    while True:
        n = rng.randint(2, 4)
        bands = []
        for _ in range(rng.randint(1, 3)):
            conj = tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 2)))
            bands.append(Band(conj, rng.randint(1, n - 1), 1 if positive else rng.choice((1, -1))))
        f = BandFactorization(n, tuple(bands))
        if len(f.word()) <= max_letters:
            return f


def random_relation(rng: random.Random, max_strands: int = 4, max_len: int = 8):
    """A word with a braid or mixed triple spliced in, and the step that rewrites it."""
    from khcob import RewriteStep

    n = rng.randint(3, max_strands)
    w = list(random_word(rng, n, max(1, max_len - 3)).letters)
    s = rng.randint(1, n - 2)
    a, b = (s, s + 1) if rng.random() < 0.5 else (s + 1, s)
    sa, sb = rng.choice((1, -1)), rng.choice((1, -1))
    p = rng.randint(0, len(w))
    if rng.random() < 0.5:
        w[p:p] = [sa * a, sa * b, sa * a]
        kind = "braid"
    else:
        w[p:p] = [sa * a, sb * b, -sa * a]
        kind = "mixed"
    return BraidWord(n, tuple(w)), RewriteStep(kind, p)
