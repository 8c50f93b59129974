"""Candidate distinguishing cycles and certificates.

The searcher is best effort.  When it finds nothing it says so "within
budget"; it never claims that no certificate exists.
"""
from __future__ import annotations

import hashlib
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator

from . import linalg
from .cobordism import Movie, MovieError, MovieEvent, emit_movie, evaluate_movie, parse_movie
from .complex import (Bigrading, Chain, LabeledSmoothing, differential, differential_terms,
                      format_chain, generators_at, grading_of, is_cycle)
from .diagram import Diagram, DiagramError, crossing_counts, emit_diagram
from .planar import face_match, saddle
from .simplify import simplify


def diagram_hash(d: Diagram) -> str:
    return hashlib.sha256(emit_diagram(d).encode()).hexdigest()[:16]


def _induced_labels(d: Diagram, state: int) -> int:
    loops = d.resolve(state)
    mask = 0
    for k, zero in enumerate(loops.zero_tracing):
        if zero:
            mask |= 1 << k
    return mask


def orientation_induced_key(d: Diagram) -> tuple[int, int]:
    state = d.oriented_smoothing().mask
    return state, _induced_labels(d, state)


def orientation_induced_generator(d: Diagram) -> LabeledSmoothing:
    """Oriented smoothing with 0-tracing loops labeled x and the rest 1."""
    return LabeledSmoothing.of(d, *orientation_induced_key(d))


def _distance(d: Diagram, oriented: int, state: int, labels: int) -> tuple[int, int]:
    ref = _induced_labels(d, state)
    return bin(state ^ oriented).count("1"), bin(labels ^ ref).count("1")


def cycles_at(d: Diagram, target: Bigrading) -> list[tuple[int, int]]:
    """Single-generator cycles at ``target``, nearest to the orientation-induced one first."""
    npos, nneg = crossing_counts(d)
    want = target.h + nneg
    if not 0 <= want <= d.n:
        return []
    out = []
    for bits in combinations(range(d.n), want):
        state = sum(1 << b for b in bits)
        loops = d.resolve(state)
        twice_vm = len(loops) + target.h + npos - nneg - target.q
        if twice_vm & 1:
            continue
        vm = twice_vm // 2
        forced = 0
        ok = True
        for i, c in enumerate(d.crossings):
            if (state >> i) & 1:
                continue
            la, lc = loops.loop_of(c.arcs[0]), loops.loop_of(c.arcs[2])
            if la == lc:
                ok = False
                break
            forced |= (1 << la) | (1 << lc)
        nf = bin(forced).count("1")
        if not ok or not nf <= vm <= len(loops):
            continue
        free = [k for k in range(len(loops)) if not (forced >> k) & 1]
        for extra in combinations(free, vm - nf):
            out.append((state, forced | sum(1 << k for k in extra)))
    oriented = d.oriented_smoothing().mask if d.oriented else 0
    out.sort(key=lambda g: (_distance(d, oriented, *g), g))
    return out


class CandidateStream:
    """Iterator over candidate cycles; ``exhausted`` is set if the budget ran out."""

    def __init__(self, d: Diagram, target: Bigrading, budget: int = 100000,
                 allowed: Callable[[int, int], bool] | None = None, corrections: bool = True):
        self.d = d
        self.target = target
        self.budget = budget
        self.allowed = allowed
        self.corrections = corrections
        self.exhausted = False
        self.examined = 0
        self._it = self._run()

    def __iter__(self):
        return self

    def __next__(self) -> Chain:
        return next(self._it)

    def _spend(self) -> bool:
        self.examined += 1
        if self.examined > self.budget:
            self.exhausted = True
            return False
        return True

    def _run(self) -> Iterator[Chain]:
        d = self.d
        for g in cycles_at(d, self.target):
            if not self._spend():
                return
            yield Chain(d, {g: 1})
        if not self.corrections or self.allowed is None:
            return
        for phi, alpha in self._corrections():
            yield phi - alpha

    def _corrections(self):
        """Near-cycles phi with d(phi) = d(alpha), alpha in the allowed subcomplex."""
        d = self.d
        gens = list(generators_at(d, self.target))
        allowed = [g for g in gens if self.allowed(*g)]
        near = []
        for g in gens:
            if not self._spend():
                return
            if is_cycle(d, g) or self.allowed(*g):
                continue
            near.append((len(differential_terms(d, *g)), g))
        near.sort()
        index: dict = {}
        rows: dict = defaultdict(dict)
        for j, g in enumerate(allowed):
            for key, sign in differential_terms(d, *g):
                r = index.setdefault(key, len(index))
                v = rows[r].get(j, 0) + sign
                if v:
                    rows[r][j] = v
                else:
                    del rows[r][j]
        for _, g in near:
            if not self._spend():
                return
            phi = Chain(d, {g: 1})
            rhs = {}
            for key, v in differential(d, phi).terms.items():
                if key not in index:
                    rhs = None
                    break
                rhs[index[key]] = v
            if not rhs:
                continue
            y = linalg.solve(rows, rhs)
            if y is None:
                continue
            yield phi, Chain(d, {allowed[j]: v for j, v in y.items()})


def enumerate_candidate_cycles(d: Diagram, target: Bigrading, budget: int = 100000,
                               allowed=None) -> CandidateStream:
    return CandidateStream(d, target, budget, allowed)


@dataclass
class Certificate:
    chain: Chain
    movie_a: Movie
    movie_b: Movie
    value_a: int
    value_b: int
    transcript: list[str] = field(default_factory=list)

    def verify(self) -> bool:
        """Recompute cycle-hood and both values from the movie texts."""
        d = self.chain.diagram
        if differential(d, self.chain):
            return False
        vals = []
        for m in (self.movie_a, self.movie_b):
            fresh = parse_movie(emit_movie(m))
            vals.append(evaluate_movie(fresh, Chain(fresh.source, self.chain.terms)).scalar())
        return vals == [self.value_a, self.value_b] and abs(vals[0]) != abs(vals[1])

    def text(self) -> str:
        lines = ["certificate",
                 f"diagram {diagram_hash(self.chain.diagram)}",
                 f"movie-a {self.movie_a.digest()}",
                 f"movie-b {self.movie_b.digest()}",
                 f"value-a {self.value_a}",
                 f"value-b {self.value_b}",
                 "chain"]
        lines += format_chain(self.chain).splitlines()
        lines += ["end", "transcript"] + self.transcript + ["end"]
        return "\n".join(lines) + "\n"


def target_of(m: Movie) -> Bigrading:
    """The bigrading a chain must sit in to reach the empty diagram's (0,0)."""
    return Bigrading(0, -m.qshift)


_WORKER: dict = {}


def _init_worker(text_a: str, text_b: str):
    _WORKER["a"] = parse_movie(text_a)
    _WORKER["b"] = parse_movie(text_b)


def _values(terms) -> tuple[int, int]:
    out = []
    for key in ("a", "b"):
        m = _WORKER[key]
        out.append(evaluate_movie(m, Chain(m.source, dict(terms))).scalar())
    return out[0], out[1]


def distinguish(d: Diagram, movie_a: Movie, movie_b: Movie, candidates: Iterable[Chain] | None = None,
                budget: int = 100000, jobs: int = 1) -> Certificate | None:
    """First candidate cycle whose two images differ in absolute value."""
    for m in (movie_a, movie_b):
        if m.source != d:
            raise MovieError("movie does not start at the given diagram")
        if m.target.n or m.target.loops:
            raise MovieError("movie does not end at the empty diagram")
    target = target_of(movie_a)
    if candidates is None:
        candidates = enumerate_candidate_cycles(d, target, budget)
    log = [f"target grading {target}"]

    def gated():
        for c in candidates:
            if c and c.gradings() == {target} and not differential(d, c):
                yield c

    def finish(c, va, vb):
        log.append(f"cycle with {len(c)} term(s): values {va} and {vb}")
        cert = Certificate(c, movie_a, movie_b, va, vb, log)
        log.append("verified" if cert.verify() else "verification FAILED")
        return cert

    if jobs <= 1:
        for c in gated():
            va = evaluate_movie(movie_a, c).scalar()
            vb = evaluate_movie(movie_b, c).scalar()
            if abs(va) != abs(vb):
                return finish(c, va, vb)
        return None
    pool = ProcessPoolExecutor(jobs, initializer=_init_worker,
                               initargs=(emit_movie(movie_a), emit_movie(movie_b)))
    with pool:
        batch: list[Chain] = []
        stream = gated()
        while True:
            batch = [c for _, c in zip(range(4 * jobs), stream)]
            if not batch:
                return None
            for c, (va, vb) in zip(batch, pool.map(_values, [c.terms for c in batch])):
                if abs(va) != abs(vb):
                    return finish(c, va, vb)


def heuristic_filter(incompatible: Callable[[int], bool], crossing: int, oriented_bit: int):
    """Generators killed for structural reasons by one movie or the other:
    incompatible with the first factorization, or disoriented at the second
    movie's first resolved crossing."""
    def allowed(state: int, labels: int) -> bool:
        return incompatible(state) or ((state >> crossing) & 1) != oriented_bit
    return allowed


def band_movie(d: Diagram, p: int, q: int, depth: int = 4) -> Movie:
    """Saddle along the band between arcs p and q, then simplify to nothing."""
    post = saddle(d, p, q).post
    return Movie.build(d, [MovieEvent("saddle", (p, q))] + simplify(post, depth))


def slice_bands(d: Diagram, depth: int = 4) -> list[tuple[int, int]]:
    """Bands whose surgery gives a two-component diagram the simplifier unknots.

    Each such band caps off to a ribbon disk.  Bands the greedy simplifier
    cannot finish are skipped, so the list may be incomplete.
    """
    out = []
    arcs = sorted(a for a in d.arcs if a not in d.loops)
    for k, p in enumerate(arcs):
        for q in arcs[k + 1:]:
            if not face_match(d, p, q):
                continue
            post = saddle(d, p, q).post
            if len(post.components()) != 2:
                continue
            try:
                simplify(post, depth)
            except DiagramError:
                continue
            out.append((p, q))
    return out
