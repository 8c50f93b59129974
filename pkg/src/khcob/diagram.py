"""Combinatorial link diagrams in planar-diagram (PD) form.

A crossing lists its four incident arcs counterclockwise, starting from the
incoming under-strand.  With slots ``(a, b, c, d)`` the under-strand runs
a -> c and the over-strand runs d -> b on a positive crossing and b -> d on a
negative one.  The 0-smoothing joins (a, b) and (c, d); the 1-smoothing joins
(a, d) and (b, c).  A crossing with sign 0 is unoriented; such crossings only
appear inside partially resolved diagrams, where either under slot may come
first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DiagramError(ValueError):
    """Malformed or inconsistent diagram data, optionally with a source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col or 1}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Crossing:
    sign: int
    arcs: tuple[int, int, int, int]

    def __post_init__(self):
        if self.sign not in (1, -1, 0):
            raise DiagramError(f"bad crossing sign {self.sign!r}")
        if len(self.arcs) != 4:
            raise DiagramError("a crossing needs exactly four arcs")


@dataclass(frozen=True)
class Smoothing:
    """A 0/1 choice per crossing; bit i belongs to crossing i."""

    bits: tuple[int, ...]

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Smoothing":
        return cls(tuple((mask >> i) & 1 for i in range(n)))

    @classmethod
    def parse(cls, text: str) -> "Smoothing":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise DiagramError(f"bad smoothing bitstring {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @property
    def mask(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class LoopSet:
    """Loops of a resolved diagram, ordered by canonical id (the least arc id)."""

    ids: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    zero_tracing: tuple[bool, ...]
    one_tracing: tuple[bool, ...]
    index: dict = field(compare=False, hash=False, repr=False)

    def __len__(self):
        return len(self.ids)

    def loop_of(self, arc: int) -> int:
        """Position (in canonical order) of the loop containing ``arc``."""
        return self.index[arc]


def _popcount(x: int) -> int:
    return bin(x).count("1")


class Diagram:
    """An immutable link diagram.

    ``crossings`` is a sequence of ``Crossing`` (or ``(sign, (a, b, c, d))``
    pairs); ``loops`` lists ids of crossingless closed components.
    """

    __slots__ = ("crossings", "loops", "_arcs", "_slots", "_tail", "_head",
                 "_cache", "_pairs", "_arcidx")

    def __init__(self, crossings: Iterable = (), loops: Iterable[int] = ()):
        xs = []
        for c in crossings:
            if not isinstance(c, Crossing):
                sign, arcs = c
                c = Crossing(int(sign), tuple(int(a) for a in arcs))
            xs.append(c)
        self.crossings: tuple[Crossing, ...] = tuple(xs)
        self.loops: tuple[int, ...] = tuple(sorted(int(k) for k in loops))
        self._cache = {}
        self._validate()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_pd(cls, pd: Sequence[Sequence[int]], loops: Iterable[int] = ()) -> "Diagram":
        """Build an oriented diagram from a bare PD code, inferring crossing signs.

        Each tuple must start at the incoming under-strand.  Orientation of
        over-strands is propagated along components.
        """
        pd = [tuple(int(a) for a in x) for x in pd]
        # role[arc] = set of (crossing, slot, 'in'|'out')
        ends: dict[int, list[tuple[int, int]]] = {}
        for i, x in enumerate(pd):
            for k, a in enumerate(x):
                ends.setdefault(a, []).append((i, k))
        direction: dict[tuple[int, int], str] = {}
        for i in range(len(pd)):
            direction[(i, 0)] = "in"
            direction[(i, 2)] = "out"
        changed = True
        while changed:
            changed = False
            for a, es in ends.items():
                if len(es) != 2:
                    raise DiagramError(f"arc {a} appears {len(es)} times")
                e1, e2 = es
                for u, v in ((e1, e2), (e2, e1)):
                    if u in direction and v not in direction:
                        direction[v] = "out" if direction[u] == "in" else "in"
                        changed = True
            for i in range(len(pd)):
                for u, v in (((i, 1), (i, 3)), ((i, 3), (i, 1))):
                    if u in direction and v not in direction:
                        direction[v] = "out" if direction[u] == "in" else "in"
                        changed = True
            if not changed:
                # a component lying entirely over: orient it arbitrarily
                for i in range(len(pd)):
                    if (i, 1) not in direction:
                        direction[(i, 1)] = "out"
                        changed = True
                        break
        crossings = []
        for i, x in enumerate(pd):
            crossings.append((1 if direction[(i, 1)] == "out" else -1, x))
        return cls(crossings, loops)

    # -- validation -----------------------------------------------------------

    def _validate(self):
        slots: dict[int, list[tuple[int, int]]] = {}
        for i, c in enumerate(self.crossings):
            for k, a in enumerate(c.arcs):
                slots.setdefault(a, []).append((i, k))
        for a, s in slots.items():
            if len(s) != 2:
                raise DiagramError(f"dangling arc {a}: appears in {len(s)} crossing slot(s)")
        if len(set(self.loops)) != len(self.loops):
            raise DiagramError("repeated loop id")
        for k in self.loops:
            if k in slots:
                raise DiagramError(f"loop {k} also used as a crossing arc")
        self._slots = slots
        self._arcs = tuple(sorted(set(slots) | set(self.loops)))
        self._arcidx = {a: j for j, a in enumerate(self._arcs)}
        tail: dict[int, tuple[int, int]] = {}
        head: dict[int, tuple[int, int]] = {}
        if self.oriented:
            for i, c in enumerate(self.crossings):
                ins = (0, 3) if c.sign > 0 else (0, 1)
                for k in range(4):
                    book = head if k in ins else tail
                    a = c.arcs[k]
                    if a in book:
                        raise DiagramError(f"inconsistent orientation on arc {a}")
                    book[a] = (i, k)
        self._tail = tail
        self._head = head
        pairs = []
        for c in self.crossings:
            a, b, cc, d = (self._arcidx[x] for x in c.arcs)
            pairs.append((((a, b), (cc, d)), ((a, d), (b, cc))))
        self._pairs = pairs

    # -- basic data -------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def oriented(self) -> bool:
        return all(c.sign != 0 for c in self.crossings)

    @property
    def arcs(self) -> tuple[int, ...]:
        return self._arcs

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(c.sign for c in self.crossings)

    def slots(self, arc: int) -> list[tuple[int, int]]:
        """The (crossing, slot) ends of ``arc``; empty for a crossingless loop."""
        return list(self._slots.get(arc, ()))

    def tail(self, arc: int) -> tuple[int, int]:
        """Slot where ``arc`` leaves a crossing."""
        return self._tail[arc]

    def head(self, arc: int) -> tuple[int, int]:
        """Slot where ``arc`` enters a crossing."""
        return self._head[arc]

    def arc_at(self, crossing: int, slot: int) -> int:
        return self.crossings[crossing].arcs[slot % 4]

    def next_arc_id(self) -> int:
        return (max(self._arcs) + 1) if self._arcs else 1

    def __eq__(self, other):
        return (isinstance(other, Diagram) and self.crossings == other.crossings
                and self.loops == other.loops)

    def __hash__(self):
        return hash((self.crossings, self.loops))

    def __repr__(self):
        return f"Diagram(n={self.n}, arcs={len(self._arcs)}, loops={list(self.loops)})"

    def components(self) -> list[tuple[int, ...]]:
        """Arcs of each component in traversal order, starting at the least arc.

        Crossingless loops are singleton components.
        """
        if not self.oriented:
            raise DiagramError("components need an oriented diagram")
        seen = set()
        out = []
        for a in self._arcs:
            if a in seen or a in self.loops:
                continue
            comp = []
            cur = a
            while cur not in seen:
                seen.add(cur)
                comp.append(cur)
                i, k = self._head[cur]
                cur = self.crossings[i].arcs[(k + 2) % 4]
            out.append(tuple(comp))
        out.extend((k,) for k in self.loops)
        out.sort(key=lambda c: c[0])
        return out

    # -- smoothings ---------------------------------------------------------

    def resolve(self, s) -> LoopSet:
        """Loops of the smoothing ``s`` (a Smoothing, bit sequence or mask)."""
        if isinstance(s, Smoothing):
            if len(s) != self.n:
                raise DiagramError(f"smoothing has {len(s)} bits, diagram has {self.n} crossings")
            mask = s.mask
        elif isinstance(s, int):
            if s < 0 or s >> self.n:
                raise DiagramError(f"state mask {s} out of range for {self.n} crossings")
            mask = s
        else:
            bits = tuple(s)
            if len(bits) != self.n:
                raise DiagramError(f"smoothing has {len(bits)} bits, diagram has {self.n} crossings")
            mask = Smoothing(bits).mask
        got = self._cache.get(mask)
        if got is None:
            got = self._resolve(mask)
            self._cache[mask] = got
        return got

    def _resolve(self, mask: int) -> LoopSet:
        m = len(self._arcs)
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, pr in enumerate(self._pairs):
            for u, v in pr[(mask >> i) & 1]:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        groups: dict[int, list[int]] = {}
        for j in range(m):
            groups.setdefault(find(j), []).append(self._arcs[j])
        members = sorted(tuple(g) for g in groups.values())
        index = {}
        for li, g in enumerate(members):
            for a in g:
                index[a] = li
        zero = [False] * len(members)
        one = [False] * len(members)
        for i, c in enumerate(self.crossings):
            flags = one if (mask >> i) & 1 else zero
            for a in c.arcs:
                flags[index[a]] = True
        return LoopSet(tuple(g[0] for g in members), tuple(members), tuple(zero), tuple(one), index)

    def crossing_counts(self) -> tuple[int, int]:
        return crossing_counts(self)

    def oriented_smoothing(self) -> Smoothing:
        return oriented_smoothing(self)

    # -- faces ------------------------------------------------------------------

    def faces(self) -> list[list[tuple[int, int, int]]]:
        """Faces of the diagram as cyclic lists of ``(arc, from_crossing, from_slot)``.

        Each face is walked with the face on the left; an entry means the walk
        runs along ``arc`` starting at the given crossing slot.  Crossingless
        loops are not part of any face.
        """
        if "faces" in self._cache:
            return self._cache["faces"]
        corners = [(i, k) for i in range(self.n) for k in range(4)]
        seen = set()
        faces = []
        for start in corners:
            if start in seen:
                continue
            face = []
            cur = start
            while cur not in seen:
                seen.add(cur)
                i, k = cur
                a = self.crossings[i].arcs[k]
                s1, s2 = self._slots[a]
                other = s2 if s1 == (i, k) else s1
                face.append((a, i, k))
                cur = (other[0], (other[1] - 1) % 4)
            faces.append(face)
        self._cache["faces"] = faces
        return faces

    def along(self, arc: int, from_slot: tuple[int, int]) -> bool:
        """Whether walking ``arc`` from ``from_slot`` follows its orientation."""
        return self._tail[arc] == from_slot


def crossing_counts(d: Diagram) -> tuple[int, int]:
    """(n+, n-) read from crossing signs."""
    pos = sum(1 for c in d.crossings if c.sign > 0)
    neg = sum(1 for c in d.crossings if c.sign < 0)
    return pos, neg


def oriented_smoothing(d: Diagram) -> Smoothing:
    """0 at positive crossings and 1 at negative ones."""
    if not d.oriented:
        raise DiagramError("oriented smoothing needs an oriented diagram")
    return Smoothing(tuple(0 if c.sign > 0 else 1 for c in d.crossings))


def resolve(d: Diagram, s) -> LoopSet:
    return d.resolve(s)


# -- text format ----------------------------------------------------------------

_SIGN_CHARS = {"+": 1, "-": -1, "0": 0}


def emit_diagram(d: Diagram) -> str:
    """Canonical text for ``d``; ``parse_diagram(emit_diagram(d)) == d``."""
    lines = [f"crossings {d.n}"]
    for c in d.crossings:
        sign = {1: "+", -1: "-", 0: "0"}[c.sign]
        lines.append(f"{sign} {c.arcs[0]} {c.arcs[1]} {c.arcs[2]} {c.arcs[3]}")
    if d.oriented:
        for comp in d.components():
            if len(comp) == 1 and comp[0] in d.loops:
                continue
            lines.append("component " + " ".join(str(a) for a in comp))
    for k in d.loops:
        lines.append(f"loop {k}")
    return "\n".join(lines) + "\n"


def _int_token(tok: str, line: int, col: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise DiagramError(f"expected an integer, got {tok!r}", line, col) from None
    if v < 0:
        raise DiagramError(f"arc ids must be non-negative, got {v}", line, col)
    return v


def _tokens(raw: str):
    col = 0
    out = []
    for part in raw.split():
        col = raw.index(part, col)
        out.append((part, col + 1))
        col += len(part)
    return out


def parse_diagram(text: str) -> Diagram:
    """Parse the line-based diagram format.

    ::

        # comment
        crossings 3
        + 1 5 2 4
        ...
        component 1 2 3 4 5 6
        loop 7

    ``component`` lines are optional; when present they must list every arc
    of a component in traversal order and are checked against the crossings.
    """
    crossings = []
    loops = []
    loop_pos = {}
    comps = []
    declared = None
    header_line = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body)
        if not toks:
            continue
        head, hcol = toks[0]
        if head == "crossings":
            if declared is not None:
                raise DiagramError("duplicate 'crossings' header", ln, hcol)
            if len(toks) != 2:
                raise DiagramError("'crossings' takes one count", ln, hcol)
            declared = _int_token(toks[1][0], ln, toks[1][1])
            header_line = ln
        elif head in _SIGN_CHARS:
            if declared is None:
                raise DiagramError("crossing line before 'crossings' header", ln, hcol)
            if len(toks) != 5:
                raise DiagramError("crossing line needs a sign and four arcs", ln, hcol)
            arcs = tuple(_int_token(t, ln, c) for t, c in toks[1:])
            crossings.append((_SIGN_CHARS[head], arcs, ln, hcol))
        elif head == "component":
            if len(toks) < 2:
                raise DiagramError("empty component line", ln, hcol)
            comps.append(([_int_token(t, ln, c) for t, c in toks[1:]], ln, hcol))
        elif head == "loop":
            if len(toks) != 2:
                raise DiagramError("'loop' takes one arc id", ln, hcol)
            k = _int_token(toks[1][0], ln, toks[1][1])
            loops.append(k)
            loop_pos[k] = (ln, toks[1][1])
        else:
            raise DiagramError(f"unknown directive {head!r}", ln, hcol)
    if declared is None:
        if crossings or comps:
            raise DiagramError("missing 'crossings' header", 1, 1)
        declared = 0
    if declared != len(crossings):
        raise DiagramError(f"header declares {declared} crossings, found {len(crossings)}",
                           header_line, 1)
    counts: dict[int, list[tuple[int, int]]] = {}
    for _, arcs, ln, col in crossings:
        for a in arcs:
            counts.setdefault(a, []).append((ln, col))
    for a, where in counts.items():
        if len(where) != 2:
            ln, col = where[0]
            raise DiagramError(f"dangling arc {a}: appears in {len(where)} crossing slot(s)", ln, col)
        if a in loop_pos:
            raise DiagramError(f"loop {a} also used as a crossing arc", *loop_pos[a])
    try:
        d = Diagram([(s, a) for s, a, _, _ in crossings], loops)
    except DiagramError as err:
        ln, col = (crossings[0][2], crossings[0][3]) if crossings else (1, 1)
        if "orientation" in err.message:
            # locate the first crossing that reuses an endpoint role
            seen = {}
            for s, arcs, l2, c2 in crossings:
                ins = (0, 3) if s > 0 else (0, 1)
                for k, a in enumerate(arcs):
                    key = (a, k in ins)
                    if key in seen:
                        ln, col = l2, c2
                        break
                    seen[key] = True
                else:
                    continue
                break
        raise DiagramError(err.message, ln, col) from None
    if comps:
        if not d.oriented:
            raise DiagramError("component lines need oriented crossings", comps[0][1], comps[0][2])
        listed = set()
        for arcs, ln, col in comps:
            for j, a in enumerate(arcs):
                if a in listed:
                    raise DiagramError(f"arc {a} listed in two components", ln, col)
                listed.add(a)
                if a not in d._slots:
                    raise DiagramError(f"unknown arc {a} in component", ln, col)
                nxt = arcs[(j + 1) % len(arcs)]
                i, k = d.head(a)
                if d.crossings[i].arcs[(k + 2) % 4] != nxt:
                    raise DiagramError(f"inconsistent orientation: arc {a} is not followed by {nxt}",
                                       ln, col)
        missing = set(d._slots) - listed
        if missing:
            raise DiagramError(f"arcs {sorted(missing)} not covered by component lines",
                               comps[-1][1], 1)
    return d
