"""Local surgeries on PD diagrams.

Every function returns a ``Surgery``: the new diagram plus a record of where
each old arc's material went and how surviving crossings were renumbered.
Surviving crossings keep their relative order; new crossings are appended.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .diagram import Crossing, Diagram, DiagramError


class SiteError(DiagramError):
    """The requested move does not fit the diagram at the given site."""


@dataclass(frozen=True)
class Surgery:
    pre: Diagram
    post: Diagram
    arcs: Mapping[int, tuple[int, ...]]
    crossings: Mapping[int, int]
    info: dict = field(default_factory=dict, compare=False)

    def corr(self, arc: int) -> tuple[int, ...]:
        return self.arcs.get(arc, ())


def _identity_arcs(d: Diagram, skip=()) -> dict[int, tuple[int, ...]]:
    return {a: (a,) for a in d.arcs if a not in skip}


def _renumber(n: int, removed) -> dict[int, int]:
    out = {}
    j = 0
    for i in range(n):
        if i in removed:
            continue
        out[i] = j
        j += 1
    return out


def _assemble(d: Diagram, removed, rename: Mapping[int, int], loops, unoriented=False,
              extra=()) -> Diagram:
    xs = []
    for i, c in enumerate(d.crossings):
        if i in removed:
            continue
        arcs = tuple(rename.get(a, a) for a in c.arcs)
        xs.append(Crossing(0 if unoriented else c.sign, arcs))
    xs.extend(extra)
    return Diagram(xs, loops)


def _excise(d: Diagram, removed, joins):
    """Union arcs through removed crossings; returns the arc groups."""
    parent = {a: a for a in d.arcs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (x1, k1), (x2, k2) in joins:
        a, b = find(d.arc_at(x1, k1)), find(d.arc_at(x2, k2))
        if a != b:
            parent[a] = b
    groups: dict[int, set] = {}
    for a in d.arcs:
        groups.setdefault(find(a), set()).add(a)
    out = []
    for g in groups.values():
        if len(g) == 1:
            (a,) = g
            touched = any(x in removed for x, _ in d.slots(a))
            if not touched:
                continue
        external = any(x not in removed for a in g for x, _ in d.slots(a))
        out.append((g, external))
    return out


# -- Morse moves ------------------------------------------------------------------

def face_match(d: Diagram, p: int, q: int):
    """Faces where p and q both appear, walked the same way relative to orientation."""
    hits = []
    for fi, face in enumerate(d.faces()):
        dp = [d.along(a, (x, k)) for a, x, k in face if a == p]
        dq = [d.along(a, (x, k)) for a, x, k in face if a == q]
        if any(u == v for u in dp for v in dq):
            hits.append(fi)
    return hits


def saddle(d: Diagram, p: int, q: int, check: bool = True) -> Surgery:
    """Oriented band between arcs p and q (in a common face).

    The arc from tail(p) to head(q) keeps id p and the arc from tail(q) to
    head(p) keeps id q.  A band from an arc to itself splits off a new loop.
    """
    if not d.oriented:
        raise SiteError("saddles need an oriented diagram")
    for a in (p, q):
        if a not in d.arcs:
            raise SiteError(f"no arc {a}")
    loops = set(d.loops)
    new = d.next_arc_id()
    arcs = _identity_arcs(d)
    if p == q:
        arcs[p] = (p, new)
        post = _assemble(d, (), {}, loops | {new})
        return Surgery(d, post, arcs, _renumber(d.n, ()), {"kind": "split", "new": new})
    if p in loops and q in loops:
        keep = min(p, q)
        arcs[p] = arcs[q] = (keep,)
        post = _assemble(d, (), {}, (loops - {p, q}) | {keep})
        return Surgery(d, post, arcs, _renumber(d.n, ()), {"kind": "merge"})
    if p in loops or q in loops:
        lp, other = (p, q) if p in loops else (q, p)
        arcs[lp] = (other,)
        post = _assemble(d, (), {}, loops - {lp})
        return Surgery(d, post, arcs, _renumber(d.n, ()), {"kind": "merge"})
    if check and not face_match(d, p, q):
        raise SiteError(f"arcs {p} and {q} do not face each other with matching orientation")
    hp, hq = d.head(p), d.head(q)
    xs = [list(c.arcs) for c in d.crossings]
    xs[hp[0]][hp[1]] = q
    xs[hq[0]][hq[1]] = p
    post = Diagram([(c.sign, tuple(x)) for c, x in zip(d.crossings, xs)], d.loops)
    arcs[p] = (p, q)
    arcs[q] = (q, p)
    return Surgery(d, post, arcs, _renumber(d.n, ()), {"kind": "band"})


def birth(d: Diagram, arc: int | None = None) -> Surgery:
    new = d.next_arc_id() if arc is None else arc
    if new in d.arcs:
        raise SiteError(f"arc {new} already exists")
    post = Diagram(d.crossings, set(d.loops) | {new})
    return Surgery(d, post, _identity_arcs(d), _renumber(d.n, ()), {"loop": new})


def death(d: Diagram, loop: int) -> Surgery:
    if loop not in d.loops:
        raise SiteError(f"{loop} is not a crossingless loop")
    post = Diagram(d.crossings, set(d.loops) - {loop})
    return Surgery(d, post, _identity_arcs(d, skip=(loop,)), _renumber(d.n, ()), {"loop": loop})


# -- Reidemeister I ---------------------------------------------------------------

def kink_arcs(d: Diagram, i: int) -> list[tuple[int, int]]:
    """(arc, first slot) for each monogon at crossing i."""
    c = d.crossings[i].arcs
    return [(c[s], s) for s in range(4) if c[s] == c[(s + 1) % 4]]


def remove_kink(d: Diagram, i: int, arc: int | None = None) -> Surgery:
    kinks = kink_arcs(d, i)
    if arc is not None:
        kinks = [k for k in kinks if k[0] == arc]
    if not kinks:
        raise SiteError(f"crossing {i} has no monogon" + (f" on arc {arc}" if arc is not None else ""))
    k, s = kinks[0]
    c = d.crossings[i].arcs
    y1, y2 = c[(s + 2) % 4], c[(s + 3) % 4]
    joins = [((i, (s + 2) % 4), (i, s)), ((i, (s + 1) % 4), (i, (s + 3) % 4))]
    groups = _excise(d, {i}, joins)
    loops = set(d.loops)
    w = min(y1, y2)
    rename = {}
    for g, external in groups:
        if external:
            for a in g:
                rename[a] = w
        else:
            loops.add(w)
    arcs = _identity_arcs(d, skip=(k, y1, y2))
    arcs[y1] = (w,)
    arcs[y2] = (w,)
    arcs[k] = ()
    post = _assemble(d, {i}, rename, loops)
    info = {"kink": k, "circle_bit": 0 if s % 2 == 0 else 1, "strand": w, "crossing": i}
    return Surgery(d, post, arcs, _renumber(d.n, {i}), info)


_KINK_PATTERNS = {
    (1, "under"): ("u", "v", "k", "k"),
    (1, "over"): ("k", "k", "v", "u"),
    (-1, "under"): ("u", "k", "k", "v"),
    (-1, "over"): ("k", "u", "v", "k"),
}


def add_kink(d: Diagram, arc: int, sign: int, first: str = "under") -> Surgery:
    """Put a curl of the given sign on ``arc``; ``first`` is how the arc meets the new crossing."""
    if (sign, first) not in _KINK_PATTERNS:
        raise SiteError(f"bad kink variant {(sign, first)}")
    if arc not in d.arcs:
        raise SiteError(f"no arc {arc}")
    k = d.next_arc_id()
    loops = set(d.loops)
    xs = [list(c.arcs) for c in d.crossings]
    if arc in loops:
        loops.discard(arc)
        v = arc
    else:
        v = k + 1
        x, s = d.head(arc)
        xs[x][s] = v
    names = {"u": arc, "v": v, "k": k}
    new = tuple(names[t] for t in _KINK_PATTERNS[(sign, first)])
    crossings = [(c.sign, tuple(x)) for c, x in zip(d.crossings, xs)] + [(sign, new)]
    post = Diagram(crossings, loops)
    arcs = _identity_arcs(d)
    arcs[arc] = (arc, v) if v != arc else (arc,)
    info = {"kink": k, "circle_bit": 0 if sign > 0 else 1, "strand": arc, "crossing": d.n}
    return Surgery(d, post, arcs, _renumber(d.n, ()), info)


# -- Reidemeister II --------------------------------------------------------------

def bigons(d: Diagram, i: int, j: int) -> list[tuple[int, int]]:
    """(over arc, under arc) of each two-sided face between crossings i and j
    where one strand passes over at both ends."""
    out = []
    for face in d.faces():
        if len(face) != 2:
            continue
        (a1, x1, k1), (a2, x2, k2) = face
        if {x1, x2} != {i, j} or a1 == a2:
            continue
        sa = [k for x, k in d.slots(a1)]
        sb = [k for x, k in d.slots(a2)]
        if all(k % 2 for k in sa) and not any(k % 2 for k in sb):
            out.append((a1, a2))
        elif all(k % 2 for k in sb) and not any(k % 2 for k in sa):
            out.append((a2, a1))
    return sorted(set(out))


def remove_bigon(d: Diagram, i: int, j: int, e: int | None = None, f: int | None = None) -> Surgery:
    if i == j:
        raise SiteError("R2 needs two distinct crossings")
    found = bigons(d, i, j)
    if e is not None:
        found = [b for b in found if b[0] == e and (f is None or b[1] == f)]
    if not found:
        raise SiteError(f"no removable bigon between crossings {i} and {j}")
    e, f = found[0]
    slot = {}
    for a in (e, f):
        for x, k in d.slots(a):
            slot[(a, x)] = k
    p1 = d.arc_at(i, slot[(e, i)] + 2)
    q1 = d.arc_at(i, slot[(f, i)] + 2)
    p2 = d.arc_at(j, slot[(e, j)] + 2)
    q2 = d.arc_at(j, slot[(f, j)] + 2)
    joins = []
    for x in (i, j):
        for a in (e, f):
            joins.append(((x, slot[(a, x)]), (x, slot[(a, x)] + 2)))
    groups = _excise(d, {i, j}, joins)
    loops = set(d.loops)
    rename = {}
    named = {}
    for g, external in groups:
        kept = g - {e, f}
        name = min(kept)
        for a in kept:
            named[a] = name
        if external:
            for a in g:
                rename[a] = name
        else:
            loops.add(name)
    arcs = _identity_arcs(d, skip=(e, f, p1, p2, q1, q2))
    for a in (p1, p2, q1, q2):
        arcs[a] = (named[a],)
    arcs[e] = ()
    arcs[f] = ()
    post = _assemble(d, {i, j}, rename, loops)

    def joins_ef(x):
        se, sf = slot[(e, x)], slot[(f, x)]
        return 0 if {se, sf} in ({0, 1}, {2, 3}) else 1

    info = {"e": e, "f": f, "p": (p1, p2), "q": (q1, q2), "crossings": (i, j),
            "circle_bits": (joins_ef(i), joins_ef(j))}
    return Surgery(d, post, arcs, _renumber(d.n, {i, j}), info)


def add_bigon(d: Diagram, over: int, under: int, face: int | None = None) -> Surgery:
    """Push a finger of ``under`` beneath ``over`` across a face they share.

    Two crossings are appended; the first is the one ``under`` meets first
    when the face is walked with the face on its left.
    """
    if over == under:
        raise SiteError("R2 needs two different arcs")
    for a in (over, under):
        if a not in d.arcs:
            raise SiteError(f"no arc {a}")
    loops = set(d.loops)
    faces = d.faces()

    def walk_in(fi, a):
        for b, x, k in faces[fi]:
            if b == a:
                s1, s2 = d.slots(a)
                other = s2 if s1 == (x, k) else s1
                return (x, k), other
        return None

    if over not in loops and under not in loops:
        shared = [fi for fi, fc in enumerate(faces)
                  if any(b == over for b, _, _ in fc) and any(b == under for b, _, _ in fc)]
        if face is not None:
            shared = [fi for fi in shared if fi == face]
        if not shared:
            raise SiteError(f"arcs {over} and {under} share no face")
        fi = shared[0]
    else:
        fi = None
        solid = [a for a in (over, under) if a not in loops]
        if solid:
            cands = [k for k, fc in enumerate(faces) if any(b == solid[0] for b, _, _ in fc)]
            fi = cands[0] if face is None else face
    nxt = d.next_arc_id()
    fresh = iter(range(nxt, nxt + 6))
    xs = [list(c.arcs) for c in d.crossings]
    oriented = d.oriented

    def pieces(a):
        # (first, middle, last, along) in walking order
        mid = next(fresh)
        if a in loops:
            loops.discard(a)
            return a, mid, a, True
        start, end = walk_in(fi, a)
        along = d.along(a, start) if oriented else True
        other = next(fresh)
        if along:
            first, last = a, other
            xs[end[0]][end[1]] = last
        else:
            first, last = other, a
            xs[start[0]][start[1]] = first
        return first, mid, last, along

    o1, e, o2, o_along = pieces(over)
    u1, f, u2, u_along = pieces(under)
    if u_along:
        xr, xl = (u1, e, f, o2), (f, e, u2, o1)
    else:
        xr, xl = (f, o2, u1, e), (u2, o1, f, e)
    signs = []
    for tup in (xr, xl):
        if not oriented:
            signs.append(0)
            continue
        # slot 3 of X_R holds o2 or e, of X_L o1 or e; the piece is incoming when
        # it comes before the crossing in walking order (o1, e, o2 when along).
        # Decided by position because o1 and o2 coincide for a crossingless loop.
        if tup[3] == e:
            incoming_over = (tup is xr) == o_along
        else:
            incoming_over = (tup is xl) == o_along
        signs.append(1 if incoming_over else -1)
    crossings = [(c.sign, tuple(x)) for c, x in zip(d.crossings, xs)]
    crossings += [(signs[0], xr), (signs[1], xl)]
    post = Diagram(crossings, loops)
    arcs = _identity_arcs(d)
    arcs[over] = tuple(sorted({o1, o2}))
    arcs[under] = tuple(sorted({u1, u2}))
    info = {"e": e, "f": f, "crossings": (d.n, d.n + 1)}
    return Surgery(d, post, arcs, _renumber(d.n, ()), info)


# -- Reidemeister III -------------------------------------------------------------

def r3_site(d: Diagram, a: int, b: int, c: int):
    """Describe the triangle between three crossings.

    Returns a dict with keys T, M, B naming the strands' internal arcs and
    ``cross`` mapping strand pairs ("TM", "TB", "MB") to crossing indices.
    """
    trio = {a, b, c}
    if len(trio) != 3:
        raise SiteError("R3 needs three distinct crossings")
    for face in d.faces():
        if len(face) != 3 or {x for _, x, _ in face} != trio:
            continue
        edges = [arc for arc, _, _ in face]
        if len(set(edges)) != 3:
            continue
        kinds = {}
        for arc in edges:
            ends = d.slots(arc)
            if {x for x, _ in ends} - trio or len({x for x, _ in ends}) != 2:
                break
            over = [k % 2 == 1 for _, k in ends]
            kinds[arc] = "T" if all(over) else "B" if not any(over) else "M"
        else:
            if sorted(kinds.values()) != ["B", "M", "T"]:
                continue
            inv = {v: k for k, v in kinds.items()}
            ends = {s: {x for x, _ in d.slots(inv[s])} for s in "TMB"}
            cross = {"TM": (ends["T"] & ends["M"]).pop(),
                     "TB": (ends["T"] & ends["B"]).pop(),
                     "MB": (ends["M"] & ends["B"]).pop()}
            return {"T": inv["T"], "M": inv["M"], "B": inv["B"], "cross": cross}
    raise SiteError(f"crossings {sorted(trio)} do not bound a triangle with a top, middle and bottom strand")


def r3(d: Diagram, a: int, b: int, c: int) -> Surgery:
    """Slide one strand across the crossing of the other two.

    Crossings keep their indices (each crossing stays between the same two
    strands) and the internal arcs keep their ids.
    """
    site = r3_site(d, a, b, c)
    xs = [list(cr.arcs) for cr in d.crossings]
    new = [list(cr.arcs) for cr in d.crossings]
    strands = {"T": ("TM", "TB"), "M": ("TM", "MB"), "B": ("TB", "MB")}
    for s, (c1, c2) in strands.items():
        inner = site[s]
        x1, x2 = site["cross"][c1], site["cross"][c2]
        k1 = xs[x1].index(inner) if xs[x1].count(inner) == 1 else None
        k2 = xs[x2].index(inner) if xs[x2].count(inner) == 1 else None
        if k1 is None or k2 is None:
            raise SiteError("degenerate R3 triangle")
        ext1 = xs[x1][(k1 + 2) % 4]
        ext2 = xs[x2][(k2 + 2) % 4]
        new[x1][k1] = ext2
        new[x1][(k1 + 2) % 4] = inner
        new[x2][k2] = ext1
        new[x2][(k2 + 2) % 4] = inner
    post = Diagram([(cr.sign, tuple(x)) for cr, x in zip(d.crossings, new)], d.loops)
    return Surgery(d, post, _identity_arcs(d), _renumber(d.n, ()), dict(site))


# -- relabeling and isomorphism ------------------------------------------------------

def relabel(d: Diagram, crossing_map, arc_map: Mapping[int, int] | None = None) -> Surgery:
    """Renumber crossings (``crossing_map[old] = new``) and rename arcs."""
    arc_map = dict(arc_map or {})
    full = {a: arc_map.get(a, a) for a in d.arcs}
    if len(set(full.values())) != len(full):
        raise SiteError("arc relabeling is not injective")
    cm = list(crossing_map)
    if sorted(cm) != list(range(d.n)):
        raise SiteError("crossing relabeling is not a permutation")
    xs = [None] * d.n
    for old, c in enumerate(d.crossings):
        xs[cm[old]] = Crossing(c.sign, tuple(full[a] for a in c.arcs))
    post = Diagram(xs, [full[k] for k in d.loops])
    return Surgery(d, post, {a: (b,) for a, b in full.items()}, dict(enumerate(cm)),
                   {"rotation": {}})


def mirror(d: Diagram) -> Diagram:
    """Swap over and under at every crossing (signs flip)."""
    xs = []
    for c in d.crossings:
        a, b, cc, dd = c.arcs
        if c.sign > 0:
            xs.append(Crossing(-1, (dd, a, b, cc)))
        elif c.sign < 0:
            xs.append(Crossing(1, (b, cc, dd, a)))
        else:
            xs.append(Crossing(0, (b, cc, dd, a)))
    return Diagram(xs, d.loops)


def resolve_crossing(d: Diagram, i: int, bit: int) -> Surgery:
    """Replace crossing i by its 0- or 1-smoothing (result is unoriented)."""
    pairs = [((i, 0), (i, 1)), ((i, 2), (i, 3))] if bit == 0 else [((i, 0), (i, 3)), ((i, 1), (i, 2))]
    groups = _excise(d, {i}, pairs)
    loops = set(d.loops)
    rename = {}
    arcs = _identity_arcs(d)
    for g, external in groups:
        name = min(g)
        for a in g:
            arcs[a] = (name,)
            if external:
                rename[a] = name
        if not external:
            loops.add(name)
    post = _assemble(d, {i}, rename, loops, unoriented=True)
    return Surgery(d, post, arcs, _renumber(d.n, {i}), {"crossing": i, "bit": bit})


def find_isomorphism(d1: Diagram, d2: Diagram, fixed: Mapping[int, int] | None = None,
                     crossings: Mapping[int, int] | None = None):
    """A PD isomorphism d1 -> d2 as ``(crossing_map, arc_map)``, or None.

    Oriented crossings must match slot for slot; unoriented ones may also be
    turned by half a revolution.  ``fixed`` pins some arc images and
    ``crossings`` some crossing images.
    """
    return next(isomorphisms(d1, d2, fixed, crossings), None)


def isomorphisms(d1: Diagram, d2: Diagram, fixed: Mapping[int, int] | None = None,
                 crossings: Mapping[int, int] | None = None):
    """Every PD isomorphism d1 -> d2, lazily (see ``find_isomorphism``)."""
    pinned = dict(crossings or {})
    if d1.n != d2.n or len(d1.loops) != len(d2.loops) or len(d1.arcs) != len(d2.arcs):
        return
    fixed = dict(fixed or {})

    def rotations(c1, c2):
        if c1.sign != c2.sign:
            return ()
        return (0,) if c1.sign else (0, 2)

    def extend(cmap, rot, amap, x1, x2, r):
        stack = [(x1, x2, r)]
        cmap, rot, amap = dict(cmap), dict(rot), dict(amap)
        inv = {v: k for k, v in amap.items()}
        used = set(cmap.values())
        while stack:
            a1, a2, rr = stack.pop()
            if a1 in cmap:
                if cmap[a1] != a2 or rot[a1] != rr:
                    return None
                continue
            if a2 in used or rr not in rotations(d1.crossings[a1], d2.crossings[a2]):
                return None
            if pinned.get(a1, a2) != a2:
                return None
            cmap[a1], rot[a1] = a2, rr
            used.add(a2)
            for k in range(4):
                arc1 = d1.crossings[a1].arcs[k]
                arc2 = d2.crossings[a2].arcs[(k + rr) % 4]
                if amap.get(arc1, arc2) != arc2 or inv.get(arc2, arc1) != arc1:
                    return None
                amap[arc1] = arc2
                inv[arc2] = arc1
                for y1, l1 in d1.slots(arc1):
                    if (y1, l1) == (a1, k):
                        continue
                    ends2 = [s for s in d2.slots(arc2) if s != (a2, (k + rr) % 4)]
                    if not ends2:
                        return None
                    y2, l2 = ends2[0]
                    stack.append((y1, y2, (l2 - l1) % 4))
        return cmap, rot, amap

    def search(cmap, rot, amap):
        todo = [x for x in range(d1.n) if x not in cmap]
        if not todo:
            yield cmap, rot, amap
            return
        x1 = todo[0]
        for x2 in ([pinned[x1]] if x1 in pinned else range(d2.n)):
            if x2 in cmap.values():
                continue
            for r in rotations(d1.crossings[x1], d2.crossings[x2]):
                got = extend(cmap, rot, amap, x1, x2, r)
                if got is None:
                    continue
                if any(got[2].get(a, b) != b for a, b in fixed.items()):
                    continue
                yield from search(*got)

    for cmap, rot, amap in search({}, {}, {}):
        amap = dict(amap)
        free1 = [k for k in d1.loops if k not in fixed]
        free2 = [k for k in d2.loops if k not in fixed.values()]
        if any(fixed[k] not in d2.loops for k in d1.loops if k in fixed):
            return
        for k in d1.loops:
            if k in fixed:
                amap[k] = fixed[k]
        for a, b in zip(free1, free2):
            amap[a] = b
        yield [cmap[i] for i in range(d1.n)], amap
