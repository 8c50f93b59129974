"""Braid words, closures, Plamenevskaya's cycle and braided surfaces."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from . import planar
from .cobordism import Movie, MovieEvent, resolve_crossing_event
from .complex import Chain, LabeledSmoothing
from .diagram import Diagram, DiagramError


class BraidError(DiagramError):
    pass


# -- words ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(g) for g in self.letters))
        if self.strands < 1:
            raise BraidError("a braid needs at least one strand")
        for g in self.letters:
            if g == 0 or abs(g) >= self.strands:
                raise BraidError(f"generator {g} out of range for {self.strands} strands")

    @property
    def writhe(self) -> int:
        return sum(1 if g > 0 else -1 for g in self.letters)

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-g for g in reversed(self.letters)))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(max(self.strands, other.strands), self.letters + other.letters)

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        strands = None
        letters: list[int] = []
        for ln, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if not body:
                continue
            if body.startswith("strands"):
                toks = body.split()
                if len(toks) != 2 or not toks[1].isdigit():
                    raise BraidError("expected 'strands N'", ln, 1)
                strands = int(toks[1])
                continue
            for tok in body.split():
                try:
                    letters.append(int(tok))
                except ValueError:
                    raise BraidError(f"bad letter {tok!r}", ln, raw.index(tok) + 1) from None
        if strands is None:
            strands = max((abs(g) for g in letters), default=0) + 1
        return cls(strands, tuple(letters))

    def text(self) -> str:
        return f"strands {self.strands}\n" + " ".join(str(g) for g in self.letters) + "\n"

    def __str__(self):
        return " ".join(str(g) for g in self.letters) or "1"


def closure(b: BraidWord) -> Diagram:
    """Closed braid diagram; crossing k is letter k, strand positions are arcs 1..n at the bottom."""
    cur = list(range(1, b.strands + 1))
    nxt = b.strands + 1
    xs = []
    for g in b.letters:
        i = abs(g) - 1
        lo, hi = cur[i], cur[i + 1]
        out_lo, out_hi = nxt, nxt + 1
        nxt += 2
        if g > 0:
            xs.append((1, (hi, out_hi, out_lo, lo)))
        else:
            xs.append((-1, (lo, hi, out_hi, out_lo)))
        cur[i], cur[i + 1] = out_lo, out_hi
    ren = {cur[p]: p + 1 for p in range(b.strands)}
    xs = [(s, tuple(ren.get(a, a) for a in t)) for s, t in xs]
    used = {a for _, t in xs for a in t}
    # compact arc ids so the numbering depends only on the word
    order = sorted(used)
    compact = {a: k + 1 for k, a in enumerate(order)}
    xs = [(s, tuple(compact[a] for a in t)) for s, t in xs]
    loops = [len(order) + k + 1 for k in range(b.strands) if (k + 1) not in used]
    return Diagram(xs, loops)


def psi(b: BraidWord) -> LabeledSmoothing:
    """All loops of the oriented resolution labeled x."""
    d = closure(b)
    bits = tuple(0 if g > 0 else 1 for g in b.letters)
    from .diagram import Smoothing
    s = Smoothing(bits)
    loops = d.resolve(s)
    return LabeledSmoothing(s, tuple((k, "x") for k in loops.ids))


def psi_chain(b: BraidWord) -> Chain:
    return Chain.from_labeled(closure(b), psi(b))


def positive_stabilize(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands + 1, b.letters + (b.strands,))


# -- free group action (word problem) -------------------------------------------------

def _reduce(w: list[int]) -> list[int]:
    out: list[int] = []
    for g in w:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return out


def _inv(w):
    return [-g for g in reversed(w)]


def artin_action(b: BraidWord) -> tuple[tuple[int, ...], ...]:
    """Images of the free generators under the braid; equal iff the braids are equal."""
    imgs = [[k] for k in range(1, b.strands + 1)]
    for g in b.letters:
        i = abs(g) - 1
        x, y = imgs[i], imgs[i + 1]
        if g > 0:
            imgs[i], imgs[i + 1] = _reduce(x + y + _inv(x)), x
        else:
            imgs[i], imgs[i + 1] = y, _reduce(_inv(y) + x + y)
    return tuple(tuple(w) for w in imgs)


def braid_equal(a: BraidWord, b: BraidWord) -> bool:
    n = max(a.strands, b.strands)
    return artin_action(BraidWord(n, a.letters)) == artin_action(BraidWord(n, b.letters))


# -- bands ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Band:
    conjugator: tuple[int, ...]
    index: int
    sign: int = 1

    def letters(self) -> tuple[int, ...]:
        w = tuple(self.conjugator)
        return w + (self.sign * self.index,) + tuple(-g for g in reversed(w))

    def text(self) -> str:
        w = " ".join(str(g) for g in self.conjugator)
        return f"[ {w} ; {self.index} ; {'+' if self.sign > 0 else '-'} ]"


@dataclass(frozen=True)
class Letter:
    """Role of one letter of an expanded factorization."""

    band: int
    role: str  # conjugator, core, inverse
    partner: int | None = None


@dataclass(frozen=True)
class BandFactorization:
    strands: int
    bands: tuple[Band, ...]
    roles: tuple[Letter, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple(self.bands))
        roles: list[Letter] = []
        for bi, band in enumerate(self.bands):
            if not 1 <= band.index < self.strands:
                raise BraidError(f"band {bi}: core index {band.index} out of range")
            base = len(roles)
            k = len(band.conjugator)
            for j in range(k):
                roles.append(Letter(bi, "conjugator", base + 2 * k - j))
            roles.append(Letter(bi, "core"))
            for j in range(k):
                roles.append(Letter(bi, "inverse", base + k - 1 - j))
        object.__setattr__(self, "roles", tuple(roles))
        self.word()

    def word(self) -> BraidWord:
        out: list[int] = []
        for band in self.bands:
            out.extend(band.letters())
        return BraidWord(self.strands, tuple(out))

    @property
    def chi(self) -> int:
        return self.strands - len(self.bands)

    def cores(self) -> list[int]:
        return [k for k, r in enumerate(self.roles) if r.role == "core"]

    def pairs(self) -> list[tuple[int, int]]:
        """(conjugator letter, inverse letter), innermost first within each band."""
        out = []
        for bi in range(len(self.bands)):
            conj = [k for k, r in enumerate(self.roles) if r.band == bi and r.role == "conjugator"]
            for k in reversed(conj):
                out.append((k, self.roles[k].partner))
        return out

    @classmethod
    def parse(cls, text: str) -> "BandFactorization":
        strands = None
        bands = []
        pat = re.compile(r"^\[\s*([-\d\s]*);\s*(\d+)\s*;\s*([+-])\s*\]$")
        for ln, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if not body:
                continue
            if body.startswith("strands"):
                toks = body.split()
                if len(toks) != 2 or not toks[1].isdigit():
                    raise BraidError("expected 'strands N'", ln, 1)
                strands = int(toks[1])
                continue
            m = pat.match(body)
            if not m:
                raise BraidError("expected '[ conjugator ; index ; +|- ]'", ln, 1)
            conj = tuple(int(t) for t in m.group(1).split())
            bands.append(Band(conj, int(m.group(2)), 1 if m.group(3) == "+" else -1))
        if strands is None:
            raise BraidError("missing 'strands N' header", 1, 1)
        return cls(strands, tuple(bands))

    def text(self) -> str:
        return f"strands {self.strands}\n" + "\n".join(b.text() for b in self.bands) + "\n"


def closure_of(f: BandFactorization) -> Diagram:
    return closure(f.word())


def _oriented_bit(sign: int) -> int:
    return 0 if sign > 0 else 1


def is_compatible(g, f: BandFactorization) -> bool:
    """Cores oriented-smoothed, and each conjugating pair jointly (dis)oriented."""
    if isinstance(g, LabeledSmoothing):
        bits = g.smoothing.bits
    else:
        bits = g
    letters = f.word().letters
    if len(bits) != len(letters):
        raise BraidError("smoothing length does not match the factorization")

    def oriented(k):
        return bits[k] == _oriented_bit(1 if letters[k] > 0 else -1)

    for k in f.cores():
        if not oriented(k):
            return False
    for a, b in f.pairs():
        if oriented(a) != oriented(b):
            return False
    return True


def _bigon_between(d: Diagram, i: int, j: int):
    """The (over, under) arcs running from crossing i to crossing j."""
    shared = [a for a in d.arcs
              if a not in d.loops and d.tail(a)[0] == i and d.head(a)[0] == j]
    if len(shared) != 2:
        raise BraidError(f"crossings {i} and {j} are not adjacent in the braid")
    over = [a for a in shared if d.tail(a)[1] % 2 == 1]
    under = [a for a in shared if d.tail(a)[1] % 2 == 0]
    return over[0], under[0]


def compile_braided_surface(f: BandFactorization) -> Movie:
    """Movie from the closure to the empty diagram: core resolutions, then
    cancellations of conjugating pairs (innermost first), then deaths."""
    d = closure_of(f)
    where = list(range(d.n))  # letter -> current crossing index
    movie = Movie.build(d, [])

    def drop(removed):
        for k, c in enumerate(where):
            if c is None:
                continue
            if c in removed:
                where[k] = None
            else:
                where[k] = c - sum(1 for r in removed if r < c)

    for k in f.cores():
        step = resolve_crossing_event(movie.target, where[k])
        movie = movie + step
        drop({where[k]})
    for a, b in f.pairs():
        i, j = where[a], where[b]
        e, fa = _bigon_between(movie.target, i, j)
        movie = movie + Movie.build(movie.target, [MovieEvent("r2-", (i, j, e, fa))])
        drop({i, j})
    for loop in sorted(movie.target.loops):
        movie = movie + Movie.build(movie.target, [MovieEvent("death", (loop,))])
    if movie.target.n or movie.target.loops:
        raise AssertionError("braided surface did not cap off")
    if movie.chi != f.chi:
        raise AssertionError(f"movie Euler characteristic {movie.chi} differs from {f.chi}")
    return movie


# -- tracked rewriting ---------------------------------------------------------------

RELATIONS = ("mixed", "braid", "commute", "cancel", "insert")


@dataclass(frozen=True)
class RewriteStep:
    kind: str
    position: int
    letter: int = 0  # only for insert

    def text(self) -> str:
        return f"{self.kind} {self.position}" + (f" {self.letter}" if self.kind == "insert" else "")

    @classmethod
    def parse(cls, line: str, ln: int = 1) -> "RewriteStep":
        toks = line.split()
        if not toks or toks[0] not in RELATIONS:
            raise BraidError(f"unknown relation {toks[0] if toks else ''!r}", ln, 1)
        want = 3 if toks[0] == "insert" else 2
        if len(toks) != want:
            raise BraidError(f"{toks[0]} takes {want - 1} argument(s)", ln, 1)
        try:
            args = [int(t) for t in toks[1:]]
        except ValueError:
            raise BraidError("arguments must be integers", ln, 1) from None
        return cls(toks[0], args[0], args[1] if len(args) > 1 else 0)


def parse_script(text: str) -> list[RewriteStep]:
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append(RewriteStep.parse(body, ln))
    return out


def apply_step(letters: Sequence[int], step: RewriteStep) -> tuple[tuple[int, ...], list]:
    """Rewrite once; returns the new letters and old index -> new index (or None)."""
    w = list(letters)
    p = step.position
    n = len(w)
    track: list = list(range(n))

    def need(k):
        if p < 0 or p + k > n:
            raise BraidError(f"{step.kind} at {p} runs off the word")

    if step.kind == "commute":
        need(2)
        a, b = w[p], w[p + 1]
        if abs(abs(a) - abs(b)) < 2:
            raise BraidError(f"letters {a} {b} at {p} do not commute")
        w[p], w[p + 1] = b, a
        track[p], track[p + 1] = p + 1, p
    elif step.kind == "cancel":
        need(2)
        if w[p] != -w[p + 1]:
            raise BraidError(f"letters {w[p]} {w[p + 1]} at {p} do not cancel")
        del w[p:p + 2]
        track = [k if k < p else None if k < p + 2 else k - 2 for k in range(n)]
    elif step.kind == "insert":
        if not 0 <= p <= n or step.letter == 0:
            raise BraidError(f"cannot insert {step.letter} at {p}")
        w[p:p] = [step.letter, -step.letter]
        track = [k if k < p else k + 2 for k in range(n)]
    elif step.kind in ("braid", "mixed"):
        need(3)
        a, b, c = w[p:p + 3]
        s, t = abs(a), abs(b)
        if abs(s - t) != 1:
            raise BraidError(f"letters at {p} are not on adjacent strands")
        if step.kind == "braid":
            if not (a == c and (a > 0) == (b > 0)):
                raise BraidError(f"letters {a} {b} {c} at {p} are not a braid triple")
            new = [b, a, b]
        else:
            if c != -a:
                raise BraidError(f"letters {a} {b} {c} at {p} are not of the form x y x^-1")
            eps = 1 if a > 0 else -1
            dlt = 1 if b > 0 else -1
            new = [-eps * t, dlt * s, eps * t]
        w[p:p + 3] = new
        track[p], track[p + 2] = p + 2, p
    else:
        raise BraidError(f"unknown relation {step.kind!r}")
    return tuple(w), track


@dataclass
class Rewrite:
    start: BraidWord
    steps: list[RewriteStep]
    words: list[BraidWord]
    tracks: list[list]

    @property
    def result(self) -> BraidWord:
        return self.words[-1]

    def tracking(self) -> dict[int, int | None]:
        """Original letter index -> final letter index (None once cancelled)."""
        out = {}
        for k in range(len(self.start)):
            pos = k
            for tr in self.tracks:
                pos = None if pos is None else tr[pos]
            out[k] = pos
        return out


def rewrite_tracked(start, steps: Sequence[RewriteStep]) -> Rewrite:
    """Apply relation steps to a word (or the expansion of a factorization).

    Every step is checked against the free-group action, so an invalid
    relation can never slip through.
    """
    if isinstance(start, BandFactorization):
        start = start.word()
    words = [start]
    tracks = []
    for k, step in enumerate(steps, start=1):
        cur = words[-1]
        try:
            letters, tr = apply_step(cur.letters, step)
        except BraidError as err:
            raise BraidError(f"step {k} ({step.text()}): {err.message}") from None
        nxt = BraidWord(cur.strands, letters)
        if not braid_equal(cur, nxt):
            raise AssertionError(f"step {k} changed the braid")
        words.append(nxt)
        tracks.append(tr)
    return Rewrite(start, list(steps), words, tracks)


def _canonical(d: Diagram, target: Diagram, options: Sequence[dict]) -> MovieEvent:
    found = None
    for pins in options:
        found = planar.find_isomorphism(d, target, None, pins)
        if found is not None:
            break
    if found is None:
        raise AssertionError("rewritten diagram is not the closure of the rewritten word")
    cmap, amap = found
    ev = MovieEvent("isotopy", (), (("crossings", tuple((a, b) for a, b in enumerate(cmap) if a != b)),
                                    ("arcs", tuple(sorted((a, b) for a, b in amap.items() if a != b)))))
    return ev


def rewrite_movie(rw: Rewrite) -> Movie:
    """An isotopy movie between the closures of the first and last words.

    Each relation becomes a Reidemeister move (or nothing, for far
    commutation) followed by a relabeling onto the canonical closure.
    """
    movie = Movie.build(closure(rw.start), [])
    for step, word, tr in zip(rw.steps, rw.words[1:], rw.tracks):
        d = movie.target
        target = closure(word)
        p = step.position
        events: list[MovieEvent] = []
        if step.kind in ("braid", "mixed"):
            events = [MovieEvent("r3", (p, p + 1, p + 2), (("variant", "over"),))]
        elif step.kind == "cancel":
            e, f = _bigon_between(d, p, p + 1)
            events = [MovieEvent("r2-", (p, p + 1, e, f))]
        elif step.kind == "insert":
            events = _insertion(d, target, p, step.letter)
        part = Movie.build(d, events)
        mid = part.target
        # crossings that survive keep their identity through the relation
        pins = {}
        options = []
        if step.kind == "insert":
            n = mid.n
            pins = {k: tr[k] for k in range(d.n)}
            options = [{**pins, n - 2: p, n - 1: p + 1}, {**pins, n - 2: p + 1, n - 1: p}]
        elif step.kind == "cancel":
            for k in range(d.n):
                if tr[k] is not None:
                    pins[k - (2 if k > p + 1 else 0)] = tr[k]
            options = [pins]
        else:
            options = [{k: tr[k] for k in range(d.n)}]
        part = part + Movie.build(mid, [_canonical(mid, target, options)])
        if part.target != target:
            raise AssertionError("relabeling did not reach the canonical closure")
        movie = movie + part
    return movie


def stabilization_movie(b: BraidWord) -> Movie:
    """From the closure of the positive stabilization of ``b`` back to the closure of ``b``.

    The added letter closes up into a kink; removing it and relabeling onto
    the canonical closure is the whole movie.
    """
    big = closure(positive_stabilize(b))
    k = big.n - 1
    arcs = [a for a, _ in planar.kink_arcs(big, k)]
    if not arcs:
        raise AssertionError("the stabilizing letter does not close into a kink")
    movie = Movie.build(big, [MovieEvent("r1+", (k, arcs[0]))])
    target = closure(b)
    return movie + Movie.build(movie.target, [_canonical(movie.target, target,
                                                         [{i: i for i in range(len(b))}])])


def _insertion(d: Diagram, target: Diagram, p: int, letter: int) -> list[MovieEvent]:
    """The bigon creation whose result is the closure with (letter, -letter) at p."""
    shift = {k: (k if k < p else k + 2) for k in range(d.n)}
    n = d.n + 2
    for fi, fc in enumerate(d.faces()):
        arcs = sorted({a for a, _, _ in fc})
        for o in arcs:
            for u in arcs:
                if o == u:
                    continue
                try:
                    sg = planar.add_bigon(d, o, u, fi)
                except planar.SiteError:
                    continue
                for order in ((p, p + 1), (p + 1, p)):
                    pins = {**shift, n - 2: order[0], n - 1: order[1]}
                    if planar.find_isomorphism(sg.post, target, None, pins) is not None:
                        return [MovieEvent("r2+", (o, u), (("face", fi),))]
    raise AssertionError(f"no bigon creation realizes inserting {letter} at {p}")


def twist_family(base: BraidWord, regions: Sequence[tuple[int, int]], params: Sequence[int]) -> BraidWord:
    """Insert full twists into ``base``.

    ``regions[k] = (position, generator)`` names a slot before letter
    ``position``; parameter ``params[k]`` puts ``sigma_generator ** (2 * p)``
    there (negative p twists the other way).  All zeros give ``base`` back.
    """
    if len(regions) != len(params):
        raise BraidError("one parameter per twist region")
    letters = list(base.letters)
    for (pos, gen), p in sorted(zip(regions, params), key=lambda t: -t[0][0]):
        if not 0 <= pos <= len(letters):
            raise BraidError(f"twist position {pos} outside the word")
        if not 1 <= gen < base.strands:
            raise BraidError(f"twist generator {gen} out of range")
        letters[pos:pos] = [gen if p > 0 else -gen] * (2 * abs(p))
    return BraidWord(base.strands, tuple(letters))
