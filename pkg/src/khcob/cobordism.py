"""Chain maps induced by elementary cobordisms, and movies built from them."""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import planar
from .complex import Bigrading, Chain, grading_of
from .diagram import Diagram, DiagramError, emit_diagram, parse_diagram
from .planar import SiteError, Surgery
from .tqft import Surface, combine


class MovieError(DiagramError):
    pass


def _pop(x: int) -> int:
    return bin(x).count("1")


def removal_sign(state: int, removed: Sequence[int]) -> int:
    """Sign making crossing deletion commute with the remaining differential.

    Each deleted crossing that is 1-smoothed contributes the number of
    surviving 1-bits above it.
    """
    rem = 0
    for r in removed:
        rem |= 1 << r
    total = 0
    for r in removed:
        if (state >> r) & 1:
            total += _pop((state >> (r + 1)) & ~(rem >> (r + 1)))
    return -1 if total & 1 else 1


def compress(state: int, removed: Sequence[int]) -> int:
    """Drop the bits at ``removed`` positions, closing the gaps."""
    out = 0
    j = 0
    rem = set(removed)
    pos = 0
    while state >> pos:
        if pos not in rem:
            if (state >> pos) & 1:
                out |= 1 << j
            j += 1
        pos += 1
    return out


def flip_sign(state: int, i: int) -> int:
    """The differential's sign for flipping crossing i out of ``state``."""
    return -1 if _pop(state & ((1 << i) - 1)) & 1 else 1


def reorder_sign(state: int, perm: Sequence[int]) -> int:
    """Sign of moving 1-bits into a new crossing order (``perm[old] = new``)."""
    ones = [perm[i] for i in range(len(perm)) if (state >> i) & 1]
    inv = 0
    for a in range(len(ones)):
        for b in range(a + 1, len(ones)):
            if ones[a] > ones[b]:
                inv += 1
    return -1 if inv & 1 else 1


def permute(state: int, perm: Sequence[int]) -> int:
    out = 0
    for i, j in enumerate(perm):
        if (state >> i) & 1:
            out |= 1 << j
    return out


class LinearMap:
    """A map of chain groups C(pre) -> C(post), given generator by generator."""

    hshift = 0

    def __init__(self, pre: Diagram, post: Diagram, qshift: int = 0, name: str = ""):
        self.pre = pre
        self.post = post
        self.qshift = qshift
        self.name = name
        self._images: dict = {}

    def _compute(self, state: int, labels: int) -> dict:
        raise NotImplementedError

    def image(self, state: int, labels: int) -> dict:
        key = (state, labels)
        got = self._images.get(key)
        if got is None:
            got = {k: v for k, v in self._compute(state, labels).items() if v}
            self._images[key] = got
        return got

    def __call__(self, c: Chain, check: bool = True) -> Chain:
        if c.diagram != self.pre:
            raise MovieError(f"{self.name}: chain is not on the event's source diagram")
        check = check and self.pre.oriented and self.post.oriented
        out: dict = {}
        for (s, l), v in c.terms.items():
            img = self.image(s, l)
            if check and img:
                g = grading_of(self.pre, s, l)
                for (s2, l2) in img:
                    g2 = grading_of(self.post, s2, l2)
                    if (g2.h, g2.q) != (g.h + self.hshift, g.q + self.qshift):
                        raise AssertionError(f"{self.name}: bidegree {g} -> {g2}, "
                                             f"expected shift ({self.hshift},{self.qshift})")
            for k, w in img.items():
                out[k] = out.get(k, 0) + v * w
        return Chain(self.post, out)


class ChainMap(LinearMap):
    """``rule(state)`` returns a list of ``(target_state, terms, halve)`` where
    ``terms`` is a list of ``(coefficient, Surface)``."""

    def __init__(self, pre: Diagram, post: Diagram, rule: Callable, qshift: int, name: str = ""):
        super().__init__(pre, post, qshift, name)
        self._rule = rule
        self._rules: dict = {}

    def _compute(self, state, labels):
        rules = self._rules.get(state)
        if rules is None:
            rules = self._rule(state)
            self._rules[state] = rules
        out: dict = {}
        for tstate, terms, halve in rules:
            for m, c in combine(terms, labels, halve).items():
                k = (tstate, m)
                out[k] = out.get(k, 0) + c
        return out


class FunctionMap(LinearMap):
    """``fn(state, labels)`` returns a Chain on ``post``."""

    def __init__(self, pre, post, fn: Callable, qshift: int = 0, name: str = ""):
        super().__init__(pre, post, qshift, name)
        self._fn = fn

    def _compute(self, state, labels):
        c = self._fn(state, labels)
        if c.diagram != self.post:
            raise AssertionError(f"{self.name}: image on the wrong diagram")
        return dict(c.terms)


def compose(*maps: LinearMap, name: str = "") -> LinearMap:
    """``compose(f, g)`` applies f first."""
    for f, g in zip(maps, maps[1:]):
        if f.post != g.pre:
            raise MovieError("maps do not compose")

    def fn(s, l):
        c = Chain.generator(maps[0].pre, s, l)
        for f in maps:
            c = f(c, check=False)
        return c

    m = FunctionMap(maps[0].pre, maps[-1].post, fn, sum(f.qshift for f in maps), name)
    m.hshift = sum(f.hshift for f in maps)
    return m


def surgery_map(sg: Surgery, qshift: int, name: str, dots=()) -> ChainMap:
    """Maps for moves that keep every crossing: the surface is read off the arcs."""
    pre, post = sg.pre, sg.post

    def rule(s):
        surf = Surface(pre.resolve(s), post.resolve(s), sg.arcs, dots)
        return [(s, [(1, surf)], False)]

    return ChainMap(pre, post, rule, qshift, name)


def isotopy_map(sg: Surgery, name: str = "isotopy") -> ChainMap:
    pre, post = sg.pre, sg.post
    perm = [sg.crossings[i] for i in range(pre.n)]

    def rule(s):
        t = permute(s, perm)
        surf = Surface(pre.resolve(s), post.resolve(t), sg.arcs)
        return [(t, [(reorder_sign(s, perm), surf)], False)]

    return ChainMap(pre, post, rule, 0, name)


def kink_removal_map(sg: Surgery) -> ChainMap:
    pre, post = sg.pre, sg.post
    i = sg.info["crossing"]
    cb = sg.info["circle_bit"]
    k = sg.info["kink"]
    strand_arc = next(a for a in pre.crossings[i].arcs if a != k)

    def rule(s):
        if (s >> i) & 1 != cb:
            return []
        t = compress(s, [i])
        src, dst = pre.resolve(s), post.resolve(t)
        sign = removal_sign(s, [i])
        if cb == 0:
            return [(t, [(sign, Surface(src, dst, sg.arcs))], False)]
        terms = [(sign, Surface(src, dst, sg.arcs, [("in", k)])),
                 (-sign, Surface(src, dst, sg.arcs, [("in", strand_arc)]))]
        return [(t, terms, True)]

    return ChainMap(pre, post, rule, 0, f"r1{'+' if cb == 0 else '-'} c{i}")


def kink_creation_map(sg: Surgery) -> ChainMap:
    pre, post = sg.pre, sg.post
    n = post.n - 1
    cb = sg.info["circle_bit"]
    k = sg.info["kink"]
    strand = sg.info["strand"]

    def rule(s):
        t = s | (cb << n)
        src, dst = pre.resolve(s), post.resolve(t)
        if cb == 1:
            return [(t, [(1, Surface(src, dst, sg.arcs))], False)]
        terms = [(1, Surface(src, dst, sg.arcs, [("out", k)])),
                 (-1, Surface(src, dst, sg.arcs, [("out", strand)]))]
        return [(t, terms, True)]

    return ChainMap(pre, post, rule, 0, f"r1{'+' if cb == 0 else '-'}inv a{strand}")


def bigon_removal_map(sg: Surgery) -> ChainMap:
    pre, post = sg.pre, sg.post
    i, j = sg.info["crossings"]
    ci, cj = sg.info["circle_bits"]
    if ci == cj:
        raise SiteError("bigon smoothings are not in the expected positions")

    def rule(s):
        bi, bj = (s >> i) & 1, (s >> j) & 1
        if bi == bj:
            return []
        t = compress(s, sorted((i, j)))
        src, dst = pre.resolve(s), post.resolve(t)
        surf = Surface(src, dst, sg.arcs)
        sb = s if (bi, bj) != (ci, cj) else s ^ (1 << i) ^ (1 << j)
        eta_b = removal_sign(sb, [i, j])
        if (bi, bj) != (ci, cj):
            return [(t, [(eta_b, surf)], False)]
        low = s & ~(1 << i) & ~(1 << j)
        to_b = i if (sb >> i) & 1 else j
        to_a = i if (s >> i) & 1 else j
        lam = -eta_b * flip_sign(low, to_b) * flip_sign(low, to_a)
        return [(t, [(lam, surf)], False)]

    return ChainMap(pre, post, rule, 0, f"r2- c{i} c{j}")


def expand(state: int, positions: Sequence[int], bits: Sequence[int]) -> int:
    """Inverse of ``compress``: insert ``bits`` at the sorted ``positions``."""
    out = state
    for pos, b in sorted(zip(positions, bits)):
        low = out & ((1 << pos) - 1)
        out = ((out >> pos) << (pos + 1)) | (b << pos) | low
    return out


def bigon_insertion_map(removal: Surgery, name: str = "") -> ChainMap:
    """The inclusion inverse to a bigon removal, from the reduced diagram back."""
    big, red = removal.pre, removal.post
    i, j = removal.info["crossings"]
    e, f = removal.info["e"], removal.info["f"]
    ci, cj = removal.info["circle_bits"]
    inverse: dict[int, list[int]] = {}
    for a, img in removal.arcs.items():
        if a in (e, f):
            continue
        for b in img:
            inverse.setdefault(b, []).append(a)
    corr = {b: tuple(v) for b, v in inverse.items()}
    pos = (i, j)

    def rule(t):
        src = red.resolve(t)
        sb = expand(t, pos, (1 - ci, 1 - cj))
        sa = expand(t, pos, (ci, cj))
        eta_b = removal_sign(sb, [i, j])
        from_b = i if not (sb >> i) & 1 else j
        from_a = i if not (sa >> i) & 1 else j
        mu = -eta_b * flip_sign(sb, from_b) * flip_sign(sa, from_a)
        return [(sb, [(eta_b, Surface(src, big.resolve(sb), corr))], False),
                (sa, [(mu, Surface(src, big.resolve(sa), corr))], False)]

    return ChainMap(red, big, rule, 0, name or f"r2+ c{i} c{j}")


def bigon_homotopy(removal: Surgery) -> ChainMap:
    """Homotopy h on the big diagram with insertion o removal = 1 - dh - hd."""
    big = removal.pre
    i, j = removal.info["crossings"]
    e, f = removal.info["e"], removal.info["f"]
    ci, cj = removal.info["circle_bits"]
    corr = {a: (a,) for a in big.arcs if a not in (e, f)}

    def rule(s):
        bi, bj = (s >> i) & 1, (s >> j) & 1
        src = big.resolve(s)
        if (bi, bj) == (ci, cj):
            low = s & ~(1 << i) & ~(1 << j)
            to_a = i if bi else j
            circle = Surface(src, big.resolve(low), corr)
            return [(low, [(flip_sign(low, to_a), circle)], False)]
        if bi and bj:
            sa = s & ~((1 - ci) << i) & ~((1 - cj) << j)
            from_a = i if not ci else j
            birth = Surface(src, big.resolve(sa), corr)
            return [(sa, [(flip_sign(sa, from_a), birth)], False)]
        return []

    m = ChainMap(big, big, rule, 0, f"h c{i} c{j}")
    m.hshift = -1
    return m


def bigon_creation_map(sg: Surgery) -> ChainMap:
    i, j = sg.info["crossings"]
    back = planar.remove_bigon(sg.post, i, j, sg.info["e"], sg.info["f"])
    m = bigon_insertion_map(back)
    return ChainMap(sg.pre, sg.post, m._rule, 0, m.name)


# -- events ------------------------------------------------------------------------

@dataclass(frozen=True)
class MovieEvent:
    """One step of a movie.

    ``kind`` is one of isotopy, birth, death, saddle, dot, r1+, r1-, r1+inv,
    r1-inv, r2-, r2+, r3.  ``site`` holds arc or crossing ids; ``options``
    holds move variants (kink side, R3 variant) or the isotopy mapping.
    """

    kind: str
    site: tuple = ()
    options: tuple = ()

    @property
    def qshift(self) -> int:
        return {"birth": 1, "death": 1, "saddle": -1, "dot": -2}.get(self.kind, 0)

    @property
    def chi(self) -> int:
        return {"birth": 1, "death": 1, "saddle": -1}.get(self.kind, 0)

    def build(self, d: Diagram) -> tuple[Diagram, LinearMap]:
        k, site, opt = self.kind, self.site, dict(self.options)
        if k == "birth":
            sg = planar.birth(d, site[0] if site else None)
            return sg.post, surgery_map(sg, 1, self.text())
        if k == "death":
            sg = planar.death(d, site[0])
            return sg.post, surgery_map(sg, 1, self.text())
        if k == "saddle":
            sg = planar.saddle(d, site[0], site[1])
            return sg.post, surgery_map(sg, -1, self.text())
        if k == "dot":
            if site[0] not in d.arcs:
                raise SiteError(f"no arc {site[0]}")
            sg = Surgery(d, d, {a: (a,) for a in d.arcs}, {i: i for i in range(d.n)})
            return d, surgery_map(sg, -2, self.text(), dots=[("in", site[0])])
        if k in ("r1+", "r1-"):
            i = site[0]
            if not 0 <= i < d.n:
                raise SiteError(f"no crossing {i}")
            sg = planar.remove_kink(d, i, site[1] if len(site) > 1 else None)
            want = 0 if k == "r1+" else 1
            if sg.info["circle_bit"] != want:
                raise SiteError(f"crossing {i} is not a {'positive' if want == 0 else 'negative'} kink")
            return sg.post, kink_removal_map(sg)
        if k in ("r1+inv", "r1-inv"):
            sg = planar.add_kink(d, site[0], 1 if k == "r1+inv" else -1, opt.get("side", "under"))
            return sg.post, kink_creation_map(sg)
        if k == "r2-":
            i, j = site[0], site[1]
            for x in (i, j):
                if not 0 <= x < d.n:
                    raise SiteError(f"no crossing {x}")
            e = site[2] if len(site) > 2 else None
            f = site[3] if len(site) > 3 else None
            sg = planar.remove_bigon(d, i, j, e, f)
            return sg.post, bigon_removal_map(sg)
        if k == "r2+":
            sg = planar.add_bigon(d, site[0], site[1], opt.get("face"))
            return sg.post, bigon_creation_map(sg)
        if k == "r3":
            from .r3 import r3_map
            m = r3_map(d, site, opt.get("variant", "over"))
            return m.post, m
        if k == "isotopy":
            cmap = list(range(d.n))
            for a, b in opt.get("crossings", ()):
                cmap[a] = b
            sg = planar.relabel(d, cmap, dict(opt.get("arcs", ())))
            return sg.post, isotopy_map(sg, self.text())
        raise MovieError(f"unknown event kind {k!r}")

    def text(self) -> str:
        k, site, opt = self.kind, self.site, dict(self.options)
        if k == "isotopy":
            parts = [f"c{a}>{b}" for a, b in opt.get("crossings", ())]
            parts += [f"a{a}>{b}" for a, b in opt.get("arcs", ())]
            return " ".join(["isotopy"] + parts)
        toks = [k]
        if k in ("r1+", "r1-", "r2-", "r3"):
            ncross = {"r1+": 1, "r1-": 1, "r2-": 2, "r3": 3}[k]
            toks += [f"c{x}" for x in site[:ncross]] + [f"a{x}" for x in site[ncross:]]
        else:
            toks += [f"a{x}" for x in site]
        if "side" in opt:
            toks.append(opt["side"])
        if "face" in opt and opt["face"] is not None:
            toks.append(f"f{opt['face']}")
        if "variant" in opt:
            toks.append(opt["variant"])
        return " ".join(toks)


@dataclass
class Movie:
    diagrams: list[Diagram]
    events: list[MovieEvent]
    maps: list[LinearMap] = field(default_factory=list, repr=False)

    @classmethod
    def build(cls, start: Diagram, events: Sequence[MovieEvent]) -> "Movie":
        diagrams = [start]
        maps = []
        for step, ev in enumerate(events, start=1):
            try:
                post, m = ev.build(diagrams[-1])
            except DiagramError as err:
                raise MovieError(f"step {step} ({ev.text()}): {err}\n"
                                 f"diagram before step {step}:\n{emit_diagram(diagrams[-1])}") from None
            diagrams.append(post)
            maps.append(m)
        return cls(diagrams, list(events), maps)

    @property
    def source(self) -> Diagram:
        return self.diagrams[0]

    @property
    def target(self) -> Diagram:
        return self.diagrams[-1]

    @property
    def chi(self) -> int:
        return sum(e.chi for e in self.events)

    @property
    def qshift(self) -> int:
        return sum(m.qshift for m in self.maps)

    def census(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.events:
            out[e.kind] = out.get(e.kind, 0) + 1
        return out

    def __add__(self, other: "Movie") -> "Movie":
        if other.source != self.target:
            raise MovieError("movies do not compose: target and source differ")
        return Movie(self.diagrams + other.diagrams[1:], self.events + other.events,
                     self.maps + other.maps)

    def text(self) -> str:
        return emit_movie(self)

    def digest(self) -> str:
        return hashlib.sha256(emit_movie(self).encode()).hexdigest()[:16]


def evaluate_movie(m: Movie, c: Chain, trace: Callable | None = None) -> Chain:
    """Push ``c`` through every event; the result is checked to be homogeneous."""
    if c.diagram != m.source:
        raise MovieError("chain is not on the movie's first diagram")
    start = c.gradings()
    cur = c
    if trace:
        trace(0, None, cur)
    for step, (ev, f) in enumerate(zip(m.events, m.maps), start=1):
        cur = f(cur)
        if trace:
            trace(step, ev, cur)
    if cur and len(start) == 1:
        (g,) = start
        want = Bigrading(g.h, g.q + m.qshift)
        if cur.gradings() != {want}:
            raise AssertionError(f"movie output gradings {cur.gradings()} differ from {want}")
    return cur


def apply_morse(c: Chain, kind: str, site=()) -> Chain:
    ev = MovieEvent(kind, tuple(site))
    _, f = ev.build(c.diagram)
    return f(c)


def apply_dot(c: Chain, arc: int) -> Chain:
    _, f = MovieEvent("dot", (arc,)).build(c.diagram)
    return f(c)


def apply_reidemeister(c: Chain, event: MovieEvent) -> Chain:
    _, f = event.build(c.diagram)
    return f(c)


def apply_isotopy(c: Chain, crossing_map: Sequence[int], arc_map=None) -> Chain:
    sg = planar.relabel(c.diagram, crossing_map, arc_map)
    return isotopy_map(sg)(c)


def resolve_crossing_event(d: Diagram, crossing: int) -> Movie:
    """Oriented resolution of a crossing as a band followed by a kink removal."""
    c = d.crossings[crossing]
    a, b, _, dd = c.arcs
    if c.sign > 0:
        first = MovieEvent("saddle", (a, b))
        sg = planar.saddle(d, a, b)
        kink = b
        second = MovieEvent("r1+", (crossing, kink))
    elif c.sign < 0:
        first = MovieEvent("saddle", (a, dd))
        sg = planar.saddle(d, a, dd)
        kink = dd
        second = MovieEvent("r1-", (crossing, kink))
    else:
        raise SiteError("resolution needs an oriented crossing")
    del sg
    return Movie.build(d, [first, second])


# -- text format ----------------------------------------------------------------------

_ID = re.compile(r"^[acLf]?(\d+)$")


def _num(tok: str, ln: int, col: int) -> int:
    m = _ID.match(tok)
    if not m:
        raise MovieError(f"expected an id, got {tok!r}", ln, col)
    return int(m.group(1))


def parse_events(lines, first_line: int = 1, start: Diagram | None = None) -> list[tuple[MovieEvent, int]]:
    out = []
    for off, raw in enumerate(lines):
        ln = first_line + off
        body = raw.split("#", 1)[0]
        toks = body.split()
        if not toks:
            continue
        head = toks[0]
        rest = toks[1:]
        col = raw.index(head) + 1
        if head == "resolve":
            out.append((MovieEvent("resolve", (_num(rest[0], ln, col),)), ln))
            continue
        aliases = {"r2": "r2-", "r2inv": "r2+", "r1+^": "r1+inv", "r1-^": "r1-inv"}
        kind = aliases.get(head, head)
        if kind == "isotopy":
            cr, ar = [], []
            for t in rest:
                m = re.match(r"^([ca])(\d+)>(\d+)$", t)
                if not m:
                    raise MovieError(f"bad isotopy entry {t!r}", ln, col)
                (cr if m.group(1) == "c" else ar).append((int(m.group(2)), int(m.group(3))))
            out.append((MovieEvent("isotopy", (), (("crossings", tuple(cr)), ("arcs", tuple(ar)))), ln))
            continue
        if kind not in ("birth", "death", "saddle", "dot", "r1+", "r1-", "r1+inv", "r1-inv",
                        "r2-", "r2+", "r3"):
            raise MovieError(f"unknown event {head!r}", ln, col)
        site = []
        opts = []
        for t in rest:
            if t in ("under", "over"):
                opts.append(("side" if kind.startswith("r1") else "variant", t))
            elif t.startswith("f") and t[1:].isdigit():
                opts.append(("face", int(t[1:])))
            else:
                site.append(_num(t, ln, col))
        arity = {"birth": (0, 1), "death": (1, 1), "saddle": (2, 2), "dot": (1, 1),
                 "r1+": (1, 2), "r1-": (1, 2), "r1+inv": (1, 1), "r1-inv": (1, 1),
                 "r2-": (2, 4), "r2+": (2, 2), "r3": (3, 3)}[kind]
        if not arity[0] <= len(site) <= arity[1]:
            raise MovieError(f"{head} takes {arity[0]}..{arity[1]} ids, got {len(site)}", ln, col)
        out.append((MovieEvent(kind, tuple(site), tuple(opts)), ln))
    return out


def parse_movie(text: str, base: Path | None = None) -> Movie:
    """Parse a movie file: a diagram (inline block or ``diagram <path>``) then events.

    ``resolve cN`` expands to the band and kink-removal pair.  ``expect
    crossings N`` / ``expect loops N`` check the diagram reached so far.
    """
    lines = text.splitlines()
    start = None
    body_start = 0
    i = 0
    while i < len(lines):
        raw = lines[i].split("#", 1)[0].strip()
        if not raw:
            i += 1
            continue
        if raw == "diagram":
            j = i + 1
            while j < len(lines) and lines[j].split("#", 1)[0].strip() != "end":
                j += 1
            if j == len(lines):
                raise MovieError("unterminated diagram block", i + 1, 1)
            try:
                start = parse_diagram("\n".join(lines[i + 1:j]))
            except DiagramError as err:
                raise MovieError(err.message, (err.line or 1) + i + 1, err.col) from None
            body_start = j + 1
        elif raw.startswith("diagram "):
            path = Path(raw.split(None, 1)[1])
            if base is not None and not path.is_absolute():
                path = base / path
            start = parse_diagram(path.read_text())
            body_start = i + 1
        else:
            raise MovieError("a movie must begin with its diagram", i + 1, 1)
        break
    if start is None:
        raise MovieError("a movie must begin with its diagram", 1, 1)
    diagrams = [start]
    events: list[MovieEvent] = []
    maps: list[LinearMap] = []
    for off, raw in enumerate(lines[body_start:]):
        ln = body_start + off + 1
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("expect "):
            toks = body.split()
            if len(toks) != 3 or toks[1] not in ("crossings", "loops"):
                raise MovieError("expect takes 'crossings N' or 'loops N'", ln, 1)
            cur = diagrams[-1]
            got = cur.n if toks[1] == "crossings" else len(cur.loops)
            if got != int(toks[2]):
                raise MovieError(f"expected {toks[1]} {toks[2]}, diagram has {got}:\n"
                                 f"{emit_diagram(cur)}", ln, 1)
            continue
        parsed = parse_events([raw], ln)
        for ev, _ in parsed:
            if ev.kind == "resolve":
                sub = resolve_crossing_event(diagrams[-1], ev.site[0])
                todo = sub.events
            else:
                todo = [ev]
            for e in todo:
                try:
                    post, f = e.build(diagrams[-1])
                except DiagramError as err:
                    raise MovieError(f"event {e.text()!r} does not fit: {err}\n"
                                     f"diagram before the event:\n{emit_diagram(diagrams[-1])}",
                                     ln, 1) from None
                diagrams.append(post)
                events.append(e)
                maps.append(f)
    return Movie(diagrams, events, maps)


def emit_movie(m: Movie) -> str:
    out = ["diagram", emit_diagram(m.source).rstrip("\n"), "end"]
    out += [e.text() for e in m.events]
    return "\n".join(out) + "\n"
