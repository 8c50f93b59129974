"""Chain maps for the triangle move.

One crossing of the triangle is moved to the end of the crossing order and
resolved, which writes each complex as a cone of the two partial
resolutions.  On one side both diagrams carry a removable bigon; on the
other they are planar isotopic.  Gaussian elimination along the bigon turns
the two cones into isomorphic ones, and composing back gives the map.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from pathlib import Path

from . import planar
from .cobordism import (FunctionMap, LinearMap, bigon_homotopy, bigon_insertion_map,
                        bigon_removal_map, compose, isotopy_map)
from .complex import Chain, _edge, differential, format_chain
from .diagram import Diagram, emit_diagram
from .planar import SiteError, Surgery
from .tqft import Surface

VARIANTS = ("over", "under")


class _Restrict(LinearMap):
    """Generators of the full diagram with bit ``x`` equal to ``v`` -> partial diagram."""

    def __init__(self, d: Diagram, x: int, v: int):
        self.sg = planar.resolve_crossing(d, x, v)
        super().__init__(d, self.sg.post, 0, f"restrict c{x}={v}")
        self.x, self.v = x, v
        self._surf: dict = {}

    def _compute(self, s, l):
        if (s >> self.x) & 1 != self.v:
            return {}
        t = s & ~(1 << self.x)
        surf = self._surf.get(s)
        if surf is None:
            surf = self._surf[s] = Surface(self.pre.resolve(s), self.post.resolve(t), self.sg.arcs)
        return {(t, m): c for m, c in surf.apply(l)}


class _Extend(LinearMap):
    def __init__(self, r: _Restrict):
        super().__init__(r.post, r.pre, 0, f"extend c{r.x}={r.v}")
        inverse = {}
        for a, img in r.sg.arcs.items():
            for b in img:
                inverse.setdefault(b, []).append(a)
        self.corr = {b: tuple(v) for b, v in inverse.items()}
        self.x, self.v = r.x, r.v
        self._surf: dict = {}

    def _compute(self, t, l):
        s = t | (self.v << self.x)
        surf = self._surf.get(t)
        if surf is None:
            surf = self._surf[t] = Surface(self.pre.resolve(t), self.post.resolve(s), self.corr)
        return {(s, m): c for m, c in surf.apply(l)}


class _Saddle(LinearMap):
    """The cone's connecting map A -> B read off the full differential."""

    def __init__(self, r0: _Restrict, e0: _Extend, r1: _Restrict):
        super().__init__(r0.post, r1.post, -1, "cone")
        self.hshift = 1
        self.e0, self.r1 = e0, r1

    def _compute(self, t, l):
        d, x = self.e0.post, self.e0.x
        out: dict = {}
        for (s, m), c in self.e0.image(t, l).items():
            sign = -1 if bin(s & ((1 << x) - 1)).count("1") & 1 else 1
            for m2 in _edge(d, s, m, x):
                for key, w in self.r1.image(s | (1 << x), m2).items():
                    out[key] = out.get(key, 0) + sign * c * w
        return out


def _isotopies(d1: Diagram, d2: Diagram, avoid):
    """Candidate isotopy maps, most local first.

    The move keeps every crossing index and arcs away from the triangle keep
    their ids; near a kink the triangle's own arcs can leave that picture
    ambiguous, so looser matches are offered after the strict one.
    """
    same = {i: i for i in range(d1.n)}
    fixed = {a: a for a in d1.arcs if a in d2.arcs and a not in avoid}
    seen = set()
    for pins in ((fixed, same), (None, same), (fixed, None), (None, None)):
        for cmap, amap in islice(planar.isomorphisms(d1, d2, *pins), 8):
            key = (tuple(cmap), tuple(sorted(amap.items())))
            if key in seen:
                continue
            seen.add(key)
            sg = Surgery(d1, d2, {a: (amap[a],) for a in d1.arcs}, dict(enumerate(cmap)))
            yield isotopy_map(sg)


@dataclass
class _Side:
    r: list
    e: list
    f: LinearMap
    parts: list


def _cone(d: Diagram, x: int) -> _Side:
    r = [_Restrict(d, x, 0), _Restrict(d, x, 1)]
    e = [_Extend(r[0]), _Extend(r[1])]
    return _Side(r, e, _Saddle(r[0], e[0], r[1]), [r[0].post, r[1].post])


def _spread(n: int):
    """All n-bit states in bit-reversed order, so any prefix is evenly spread."""
    for k in range(1 << n):
        yield int(format(k, f"0{n}b")[::-1], 2) if n else 0


def _sign_between(lhs: LinearMap, rhs: LinearMap, d: Diagram, enough: int = 16,
                  cap: int = 8192) -> int | None:
    """The sign with lhs = sign * rhs on sampled generators of d, or None.

    Sampling stops after ``enough`` nonzero agreements; 0 means no evidence.
    """
    eps, seen, spent = 0, 0, 0
    for s in _spread(d.n):
        for l in range(1 << len(d.resolve(s))):
            spent += 1
            c = Chain.generator(lhs.pre, s, l)
            a, b = lhs(c, check=False), rhs(c, check=False)
            if not a and not b:
                continue
            if a == b:
                got = 1
            elif a == -1 * b:
                got = -1
            else:
                return None
            if eps and eps != got:
                return None
            eps = got
            seen += 1
        if seen >= enough or spent >= cap:
            break
    return eps


def _probe(d: Diagram, limit: int = 128):
    """All generators when there are few, otherwise an even spread of states."""
    states = range(1 << d.n)
    if (1 << d.n) * 4 > limit:
        step = max(1, (1 << d.n) // (limit // 4))
        states = range(0, 1 << d.n, step)
    out = []
    for s in states:
        for l in range(1 << len(d.resolve(s))):
            out.append((s, l))
    return out


def _commutes(m: LinearMap, probe) -> bool:
    for s, l in probe:
        c = Chain.generator(m.pre, s, l)
        if m(differential(m.pre, c), check=False) != differential(m.post, m(c, check=False)):
            return False
    return True


def _core(d: Diagram, dp: Diagram, x: int, pair: tuple[int, int], internal,
          slider: tuple[int, int]) -> tuple[LinearMap, dict]:
    """Map C(d) -> C(dp) where x is the last crossing and ``pair`` the other two.

    ``slider`` is (position, arc, joined): the internal arc of the sliding
    strand, whether it is the over (0) or under (1) edge of the bigon, and
    the two internal arcs the resolution must join into the other edge.
    """
    S, Sp = _cone(d, x), _cone(dp, x)
    avoid = set(internal) | set(d.crossings[x].arcs) | set(dp.crossings[x].arcs)
    pos, key, joined = slider

    def ours(side_, v):
        names = {side_.r[v].sg.arcs[a] for a in joined}
        if len(names) != 1:
            return []
        (merged,) = names
        want = (key, merged[0]) if pos == 0 else (merged[0], key)
        return [b for b in planar.bigons(side_.parts[v], *pair) if b == want]

    sides = [v for v in (0, 1) if ours(S, v) and ours(Sp, v)]
    if not sides:
        raise SiteError("no bigon after resolving the triangle crossing")
    y, z = pair
    for side in sides:
        other = 1 - side
        rem = planar.remove_bigon(S.parts[side], y, z, *ours(S, side)[0])
        remp = planar.remove_bigon(Sp.parts[side], y, z, *ours(Sp, side)[0])
        for phi_o in _isotopies(S.parts[other], Sp.parts[other], avoid):
            for phi_red in _isotopies(rem.post, remp.post, avoid | {rem.info["e"], rem.info["f"]}):
                got = _assemble(d, dp, x, S, Sp, side, rem, remp, phi_o, phi_red)
                if got is not None:
                    return got
    raise AssertionError("no consistent cone identification for the triangle move")


def _assemble(d, dp, x, S, Sp, side, rem, remp, phi_o, phi_red):
    p, h = bigon_removal_map(rem), bigon_homotopy(rem)
    ip, hp = bigon_insertion_map(remp), bigon_homotopy(remp)
    info = {"bigon_side": side, "crossing": x, "sign": d.crossings[x].sign}
    if side == 1:
        lhs = compose(phi_o, Sp.f, bigon_removal_map(remp))
        rhs = compose(S.f, p, phi_red)
        eps = _sign_between(rhs, lhs, S.parts[0])
        if not eps:
            return None

        def fn(s, l):
            c = Chain.generator(d, s, l)
            if (s >> x) & 1 == 0:
                a = phi_o(S.r[0](c, check=False), check=False)
                b = -1 * hp(Sp.f(a, check=False), check=False)
                return eps * (Sp.e[0](a, check=False) + Sp.e[1](b, check=False))
            b = ip(phi_red(p(S.r[1](c, check=False), check=False), check=False), check=False)
            return Sp.e[1](b, check=False)
    else:
        ins = bigon_insertion_map(rem)
        lhs = compose(phi_red, ip, Sp.f)
        rhs = compose(ins, S.f, phi_o)
        eps = _sign_between(rhs, lhs, rem.post)
        if not eps:
            return None

        def fn(s, l):
            c = Chain.generator(d, s, l)
            if (s >> x) & 1 == 0:
                a = S.r[0](c, check=False)
                top = ip(phi_red(p(a, check=False), check=False), check=False)
                low = -1 * phi_o(S.f(h(a, check=False), check=False), check=False)
                return eps * Sp.e[0](top, check=False) + Sp.e[1](low, check=False)
            b = phi_o(S.r[1](c, check=False), check=False)
            return Sp.e[1](b, check=False)

    info["epsilon"] = eps
    core = FunctionMap(d, dp, fn, 0, "r3 core")
    if not _commutes(core, _probe(d, 32)):
        return None
    return core, info


def r3_map(d: Diagram, site, variant: str = "over") -> LinearMap:
    """Chain map for the triangle move at crossings ``site``.

    ``variant`` picks the crossing that is resolved: "over" resolves the
    crossing of the middle and bottom strands (the top strand slides),
    "under" the crossing of the top and middle strands.
    """
    if variant not in VARIANTS:
        raise SiteError(f"unknown triangle variant {variant!r}")
    a, b, c = site
    sg = planar.r3(d, a, b, c)
    tri = sg.info
    x = tri["cross"]["MB" if variant == "over" else "TM"]
    rest = [tri["cross"][k] for k in ("TM", "TB", "MB") if tri["cross"][k] != x]
    n = d.n
    perm = [k if k < x else k - 1 for k in range(n)]
    perm[x] = n - 1
    inv = [0] * n
    for i, j in enumerate(perm):
        inv[j] = i
    fwd = planar.relabel(d, perm)
    dr = fwd.post
    dpr = planar.relabel(sg.post, perm).post
    core, info = _core(dr, dpr, n - 1, (perm[rest[0]], perm[rest[1]]), (tri["T"], tri["M"], tri["B"]),
                       (0, tri["T"], (tri["M"], tri["B"])) if variant == "over"
                       else (1, tri["B"], (tri["T"], tri["M"])))
    back = planar.relabel(dpr, inv)
    if back.post != sg.post:
        raise AssertionError("crossing reorder did not round-trip")
    m = compose(isotopy_map(fwd), core, isotopy_map(back), name=f"r3 c{a} c{b} c{c} {variant}")
    m.info = dict(info, variant=variant)
    return m


# -- reviewable tables ---------------------------------------------------------------

TABLE_WORDS = {"positive": (1, 2, 1), "negative": (-1, -2, -1),
               "mixed-top": (1, -2, -1), "mixed-bottom": (-1, -2, 1)}
TABLE_DIR = Path(__file__).parent / "r3_tables"


def variant_table(word, variant: str) -> str:
    """Every generator of the closure of ``word`` and its image under the move.

    The triangle is crossings 0, 1, 2 of the three-strand closure; images are
    chains on the closure of the rewritten word.
    """
    from .braid import BraidWord, closure

    d = closure(BraidWord(3, tuple(word)))
    m = r3_map(d, (0, 1, 2), variant)
    lines = [f"word {' '.join(str(g) for g in word)}", f"variant {variant}",
             f"epsilon {m.info['epsilon']}", "source"]
    lines += emit_diagram(d).splitlines()
    lines += ["end", "target"] + emit_diagram(m.post).splitlines() + ["end"]
    for s in range(1 << d.n):
        for l in range(1 << len(d.resolve(s))):
            src = Chain.generator(d, s, l)
            lines.append("gen " + format_chain(src).strip())
            img = format_chain(m(src)).strip()
            lines += ["  " + t for t in img.splitlines()] if img else ["  0"]
    return "\n".join(lines) + "\n"


def table_path(name: str, variant: str) -> Path:
    return TABLE_DIR / f"{name}-{variant}.table"
