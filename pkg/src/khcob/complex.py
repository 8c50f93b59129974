"""The Khovanov chain complex over the integers.

Generators are keyed by ``(state, labels)``: bit i of ``state`` is the
smoothing at crossing i, bit k of ``labels`` is set when the k-th loop (in
canonical order) is labeled x.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse

from . import linalg
from .diagram import Diagram, DiagramError, Smoothing, crossing_counts

DEFAULT_BUDGET = 16


class BudgetExceeded(RuntimeError):
    def __init__(self, crossings: int, budget: int):
        self.crossings = crossings
        self.budget = budget
        self.states = 2 ** crossings
        super().__init__(f"{crossings} crossings exceed the budget of {budget} "
                         f"({self.states} smoothings required)")


@dataclass(frozen=True, order=True)
class Bigrading:
    h: int
    q: int

    def __str__(self):
        return f"({self.h},{self.q})"


@dataclass(frozen=True)
class LabeledSmoothing:
    """A generator: a smoothing plus labels keyed by canonical loop id."""

    smoothing: Smoothing
    labels: tuple[tuple[int, str], ...]

    @classmethod
    def of(cls, d: Diagram, state: int, labels: int) -> "LabeledSmoothing":
        loops = d.resolve(state)
        lab = tuple((lid, "x" if (labels >> k) & 1 else "1") for k, lid in enumerate(loops.ids))
        return cls(Smoothing.from_mask(state, d.n), lab)

    def key(self, d: Diagram) -> tuple[int, int]:
        if len(self.smoothing) != d.n:
            raise DiagramError("smoothing length does not match the diagram")
        state = self.smoothing.mask
        loops = d.resolve(state)
        given = dict(self.labels)
        if set(given) != set(loops.ids):
            raise DiagramError(f"labels {sorted(given)} do not match loops {list(loops.ids)}")
        mask = 0
        for k, lid in enumerate(loops.ids):
            if given[lid] not in ("1", "x"):
                raise DiagramError(f"bad label {given[lid]!r}")
            if given[lid] == "x":
                mask |= 1 << k
        return state, mask

    @property
    def v_plus(self) -> int:
        return sum(1 for _, v in self.labels if v == "1")

    @property
    def v_minus(self) -> int:
        return sum(1 for _, v in self.labels if v == "x")


class Chain:
    """A finite integer combination of generators of one diagram."""

    __slots__ = ("diagram", "terms")

    def __init__(self, diagram: Diagram, terms: Mapping | None = None):
        self.diagram = diagram
        self.terms: dict[tuple[int, int], int] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = int(v)

    @classmethod
    def generator(cls, d: Diagram, state: int = 0, labels: int = 0, coef: int = 1) -> "Chain":
        return cls(d, {(state, labels): coef})

    @classmethod
    def from_labeled(cls, d: Diagram, g: LabeledSmoothing, coef: int = 1) -> "Chain":
        return cls(d, {g.key(d): coef})

    @classmethod
    def unit(cls) -> "Chain":
        """The generator 1 of the chain group of the empty diagram."""
        return cls(Diagram(), {(0, 0): 1})

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if other.diagram != self.diagram:
            raise DiagramError("chains live on different diagrams")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Chain(self.diagram, out)

    def __neg__(self):
        return Chain(self.diagram, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c: int):
        return Chain(self.diagram, {k: c * v for k, v in self.terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.diagram == other.diagram and self.terms == other.terms

    def __hash__(self):
        return hash((self.diagram, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Chain({format_chain(self).strip() or '0'})"

    def scalar(self) -> int:
        """Coefficient of 1 for a chain on the empty diagram."""
        if self.diagram.n or self.diagram.loops:
            raise DiagramError("scalar() needs a chain on the empty diagram")
        return self.terms.get((0, 0), 0)

    def gradings(self) -> set[Bigrading]:
        return {grading_of(self.diagram, s, l) for s, l in self.terms}


# -- gradings ------------------------------------------------------------------------

def grading_of(d: Diagram, state: int, labels: int) -> Bigrading:
    npos, nneg = crossing_counts(d)
    loops = len(d.resolve(state))
    vm = bin(labels).count("1")
    h = bin(state).count("1") - nneg
    return Bigrading(h, (loops - vm) - vm + h + npos - nneg)


def grading(d: Diagram, g) -> Bigrading:
    if isinstance(g, LabeledSmoothing):
        return grading_of(d, *g.key(d))
    return grading_of(d, *g)


# -- differential ------------------------------------------------------------------

def _transition(d: Diagram, state: int, i: int):
    key = ("tr", state, i)
    got = d._cache.get(key)
    if got is not None:
        return got
    src = d.resolve(state)
    tgt = d.resolve(state | (1 << i))
    a, b, c, _ = d.crossings[i].arcs
    la, lc = src.loop_of(a), src.loop_of(c)
    rest = [(j, tgt.loop_of(src.members[j][0])) for j in range(len(src)) if j != la and j != lc]
    if la != lc:
        got = ("m", la, lc, tgt.loop_of(a), rest)
    else:
        got = ("s", la, tgt.loop_of(a), tgt.loop_of(b), rest)
    d._cache[key] = got
    return got


def _apply(tr, labels: int):
    base = 0
    for j, j2 in tr[4]:
        if (labels >> j) & 1:
            base |= 1 << j2
    if tr[0] == "m":
        xa = (labels >> tr[1]) & 1
        xb = (labels >> tr[2]) & 1
        if xa and xb:
            return ()
        return ((base | ((xa | xb) << tr[3])),)
    p, q = tr[2], tr[3]
    if (labels >> tr[1]) & 1:
        return (base | (1 << p) | (1 << q),)
    return (base | (1 << q), base | (1 << p))


def _edge(d: Diagram, state: int, labels: int, i: int):
    """Image of one generator under the saddle at crossing i (state bit i is 0)."""
    return _apply(_transition(d, state, i), labels)


def _out_edges(d: Diagram, state: int):
    """(target state, sign, transition) for every 0-bit of ``state``."""
    key = ("out", state)
    got = d._cache.get(key)
    if got is None:
        got = []
        for i in range(d.n):
            if (state >> i) & 1:
                continue
            sign = -1 if bin(state & ((1 << i) - 1)).count("1") & 1 else 1
            got.append((state | (1 << i), sign, _transition(d, state, i)))
        d._cache[key] = got
    return got


def differential_terms(d: Diagram, state: int, labels: int):
    return [((t, l2), sign) for t, sign, tr in _out_edges(d, state) for l2 in _apply(tr, labels)]


def _edge_entries(d: Diagram, t: int, sign: int, tr, k_src: int):
    """(source labels, target labels, value) arrays for one edge of the cube."""
    labels = np.arange(1 << k_src)
    base = np.zeros_like(labels)
    for j, j2 in tr[4]:
        base |= ((labels >> j) & 1) << j2
    if tr[0] == "m":
        xa, xb = (labels >> tr[1]) & 1, (labels >> tr[2]) & 1
        keep = (xa & xb) == 0
        rows, cols = labels[keep], (base | ((xa | xb) << tr[3]))[keep]
    else:
        x = ((labels >> tr[1]) & 1).astype(bool)
        p, q = 1 << tr[2], 1 << tr[3]
        rows = np.concatenate([labels[x], labels[~x], labels[~x]])
        cols = np.concatenate([(base | p | q)[x], (base | q)[~x], (base | p)[~x]])
    return rows, cols, np.full(len(rows), sign, dtype=np.int64)


def differential_operator(d: Diagram) -> tuple[sparse.csr_matrix, list[int]]:
    """The whole differential as one sparse matrix acting on row vectors.

    Generator (s, l) has index ``offsets[s] + l``.  Built from the same
    transition data as ``differential_terms``.
    """
    offsets, total = [], 0
    for s in range(1 << d.n):
        offsets.append(total)
        total += 1 << len(d.resolve(s))
    rows, cols, vals = [], [], []
    for s in range(1 << d.n):
        k = len(d.resolve(s))
        for t, sign, tr in _out_edges(d, s):
            r, c, v = _edge_entries(d, t, sign, tr, k)
            rows.append(r + offsets[s])
            cols.append(c + offsets[t])
            vals.append(v)
    if rows:
        rows, cols, vals = np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    m = sparse.csr_matrix((vals, (rows, cols)), shape=(total, total), dtype=np.int64)
    return m, offsets


def d_squared_defects(d: Diagram) -> list[tuple[int, int]]:
    """Generators g with d(d(g)) != 0, over every generator of the complex."""
    m, offsets = differential_operator(d)
    square = (m @ m).tocoo()
    bad = sorted({int(r) for r, v in zip(square.row, square.data) if v})
    out = []
    for idx in bad:
        s = max(i for i, o in enumerate(offsets) if o <= idx)
        out.append((s, idx - offsets[s]))
    return out


def differential(d: Diagram, c: Chain) -> Chain:
    if c.diagram != d:
        raise DiagramError("chain is not on this diagram")
    out: dict = defaultdict(int)
    for (s, l), v in c.terms.items():
        for key, sign in differential_terms(d, s, l):
            out[key] += sign * v
    return Chain(d, out)


def is_cycle(d: Diagram, g) -> bool:
    """Cycle test for a single generator by the merge criterion.

    Every 0-smoothed crossing, when flipped, must merge two distinct loops
    that are both labeled x.
    """
    state, labels = g.key(d) if isinstance(g, LabeledSmoothing) else g
    loops = d.resolve(state)
    for i, c in enumerate(d.crossings):
        if (state >> i) & 1:
            continue
        la, lc = loops.loop_of(c.arcs[0]), loops.loop_of(c.arcs[2])
        if la == lc or not ((labels >> la) & 1 and (labels >> lc) & 1):
            return False
    return True


# -- Euler characteristic ------------------------------------------------------------

def _binom_row(n: int) -> list[int]:
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return row


def graded_euler_characteristic(d: Diagram) -> dict[int, int]:
    """Sum over generators of (-1)^h q^q, as ``{exponent: coefficient}``."""
    npos, nneg = crossing_counts(d)
    out: dict[int, int] = defaultdict(int)
    for state in range(1 << d.n):
        h = bin(state).count("1") - nneg
        loops = len(d.resolve(state))
        sign = -1 if h & 1 else 1
        for k, b in enumerate(_binom_row(loops)):
            # k loops labeled x: q-exponent (loops - 2k) + h + n+ - n-
            out[loops - 2 * k + h + npos - nneg] += sign * b
    return {e: c for e, c in sorted(out.items()) if c}


# -- homology --------------------------------------------------------------------------

@dataclass
class GradedGroups:
    """Homology as ``{Bigrading: (free rank, torsion orders)}``; zero groups omitted."""

    groups: dict

    def rank(self, h: int, q: int) -> int:
        return self.groups.get(Bigrading(h, q), (0, []))[0]

    def torsion(self, h: int, q: int) -> list[int]:
        return list(self.groups.get(Bigrading(h, q), (0, []))[1])

    def euler(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for g, (r, _) in self.groups.items():
            out[g.q] += (-1 if g.h & 1 else 1) * r
        return {e: c for e, c in sorted(out.items()) if c}

    def __eq__(self, other):
        return isinstance(other, GradedGroups) and self.groups == other.groups


def generators_by_grading(d: Diagram, budget: int = DEFAULT_BUDGET):
    """All generators bucketed by bigrading."""
    if d.n > budget:
        raise BudgetExceeded(d.n, budget)
    npos, nneg = crossing_counts(d)
    out: dict[Bigrading, list] = defaultdict(list)
    for state in range(1 << d.n):
        h = bin(state).count("1") - nneg
        loops = len(d.resolve(state))
        for vm in range(loops + 1):
            g = Bigrading(h, loops - 2 * vm + h + npos - nneg)
            bucket = out[g]
            for pos in combinations(range(loops), vm):
                mask = 0
                for p in pos:
                    mask |= 1 << p
                bucket.append((state, mask))
    return out


def differential_matrix(d: Diagram, source: list, target_index: dict) -> dict:
    """Sparse matrix of the differential: rows index targets, columns sources."""
    rows: dict = defaultdict(dict)
    for j, (s, l) in enumerate(source):
        for key, sign in differential_terms(d, s, l):
            r = target_index[key]
            v = rows[r].get(j, 0) + sign
            if v:
                rows[r][j] = v
            else:
                del rows[r][j]
    return rows


def homology(d: Diagram, window=None, budget: int = DEFAULT_BUDGET) -> GradedGroups:
    """Integral Khovanov homology.

    ``window`` is an optional ``((hmin, hmax), (qmin, qmax))`` restriction.
    """
    gens = generators_by_grading(d, budget)
    qs = sorted({g.q for g in gens})
    hs = sorted({g.h for g in gens})
    if window is not None:
        (h0, h1), (q0, q1) = window
        qs = [q for q in qs if q0 <= q <= q1]
        hs = [h for h in hs if h0 <= h <= h1]
    result = {}
    for q in qs:
        invariants = {}
        needed = sorted({h for h in hs} | {h - 1 for h in hs})
        for h in needed:
            src = gens.get(Bigrading(h, q), [])
            tgt = gens.get(Bigrading(h + 1, q), [])
            if not src or not tgt:
                invariants[h] = []
                continue
            index = {k: r for r, k in enumerate(tgt)}
            invariants[h] = linalg.invariant_factors(differential_matrix(d, src, index))
        for h in hs:
            dim = len(gens.get(Bigrading(h, q), []))
            if not dim:
                continue
            free = dim - len(invariants[h]) - len(invariants[h - 1])
            tors = [t for t in invariants[h - 1] if t > 1]
            if free or tors:
                result[Bigrading(h, q)] = (free, tors)
    return GradedGroups(dict(sorted(result.items())))


def is_boundary(d: Diagram, c: Chain, budget: int = DEFAULT_BUDGET):
    """An integer chain y with d(y) = c, or None."""
    if d.n > budget:
        raise BudgetExceeded(d.n, budget)
    if not c:
        return Chain(d)
    grads = c.gradings()
    if len(grads) != 1:
        raise ValueError("is_boundary needs a homogeneous chain")
    (g,) = grads
    src = [k for k in generators_at(d, Bigrading(g.h - 1, g.q))]
    if not src:
        return None
    index: dict = {}
    rows: dict = defaultdict(dict)
    for j, (s, l) in enumerate(src):
        for key, sign in differential_terms(d, s, l):
            r = index.setdefault(key, len(index))
            v = rows[r].get(j, 0) + sign
            if v:
                rows[r][j] = v
            else:
                del rows[r][j]
    rhs = {}
    for key, v in c.terms.items():
        if key not in index:
            return None
        rhs[index[key]] = v
    y = linalg.solve(rows, rhs)
    if y is None:
        return None
    return Chain(d, {src[j]: v for j, v in y.items()})


def generators_at(d: Diagram, g: Bigrading):
    """Generators of one bigrading, without touching the others."""
    npos, nneg = crossing_counts(d)
    want = g.h + nneg
    if want < 0 or want > d.n:
        return
    for bits in combinations(range(d.n), want):
        state = sum(1 << b for b in bits)
        loops = len(d.resolve(state))
        twice_vm = loops + g.h + npos - nneg - g.q
        if twice_vm & 1 or not 0 <= twice_vm // 2 <= loops:
            continue
        for pos in combinations(range(loops), twice_vm // 2):
            mask = 0
            for p in pos:
                mask |= 1 << p
            yield state, mask


def classes_agree_up_to_sign(d: Diagram, a: Chain, b: Chain, budget: int = DEFAULT_BUDGET) -> bool:
    """True when a - b or a + b is a boundary."""
    for c in (a - b, a + b):
        if not c or is_boundary(d, c, budget) is not None:
            return True
    return False


# -- text formats ------------------------------------------------------------------

def format_chain(c: Chain) -> str:
    """One ``coef * [bits | id:label, ...]`` line per term, sorted by key."""
    d = c.diagram
    lines = []
    for (s, l), v in sorted(c.terms.items()):
        loops = d.resolve(s)
        bits = str(Smoothing.from_mask(s, d.n))
        labs = ", ".join(f"{lid}:{'x' if (l >> k) & 1 else '1'}" for k, lid in enumerate(loops.ids))
        lines.append(f"{v} * [{bits} | {labs}]")
    return "\n".join(lines) + ("\n" if lines else "")


_TERM = re.compile(r"^\s*([+-]?\d+)\s*\*\s*\[\s*([01]*)\s*\|\s*(.*?)\s*\]\s*$")


def parse_chain(d: Diagram, text: str) -> Chain:
    """Inverse of ``format_chain``; the literal ``0`` (or nothing) is the zero chain."""
    out: dict = defaultdict(int)
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body or body == "0":
            continue
        m = _TERM.match(body)
        if not m:
            raise DiagramError("malformed chain term", ln, 1)
        coef, bits, labs = m.groups()
        if len(bits) != d.n:
            raise DiagramError(f"smoothing has {len(bits)} bits, diagram has {d.n} crossings", ln,
                               raw.index("[") + 2)
        labels = []
        if labs:
            for item in labs.split(","):
                try:
                    lid, lab = item.split(":")
                    labels.append((int(lid), lab.strip()))
                except ValueError:
                    raise DiagramError(f"bad label entry {item.strip()!r}", ln, 1) from None
        g = LabeledSmoothing(Smoothing.parse(bits) if bits else Smoothing(()), tuple(labels))
        try:
            key = g.key(d)
        except DiagramError as err:
            raise DiagramError(err.message, ln, 1) from None
        out[key] += int(coef)
    return Chain(d, out)


def format_polynomial(p: Mapping[int, int]) -> str:
    terms = [f"{c} q^{e}" for e, c in sorted(p.items()) if c]
    return " + ".join(terms) if terms else "0"


def parse_polynomial(text: str) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    text = text.strip()
    if text == "0" or not text:
        return {}
    for term in text.split(" + "):
        c, e = term.split(" q^")
        out[int(e)] += int(c)
    return {e: c for e, c in sorted(out.items()) if c}


def format_groups(g: GradedGroups) -> str:
    lines = []
    for bg, (r, tors) in g.groups.items():
        line = f"({bg.h},{bg.q}) {r}"
        if tors:
            line += " " + " ".join(f"Z/{t}" for t in tors)
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")
