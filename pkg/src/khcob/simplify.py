"""Greedy reduction of a diagram to crossingless loops.

Kinks and bigons are removed whenever present; when neither exists a short
breadth-first search over R3 moves looks for a diagram that has one.  The
result is a list of movie events, so it can be spliced into any movie.
"""
from __future__ import annotations

from collections import deque

from . import planar
from .cobordism import MovieEvent
from .diagram import Diagram, DiagramError


class SimplifyError(DiagramError):
    """No reduction found within the search depth."""


def shrinking_moves(d: Diagram):
    for i in range(d.n):
        for arc, s in planar.kink_arcs(d, i):
            yield MovieEvent("r1+" if s % 2 == 0 else "r1-", (i, arc))
    seen = set()
    for face in d.faces():
        if len(face) != 2:
            continue
        pair = tuple(sorted({x for _, x, _ in face}))
        if len(pair) != 2 or pair in seen:
            continue
        seen.add(pair)
        for e, f in planar.bigons(d, *pair):
            yield MovieEvent("r2-", (pair[0], pair[1], e, f))


def r3_moves(d: Diagram):
    seen = set()
    for face in d.faces():
        trio = tuple(sorted({x for _, x, _ in face}))
        if len(face) != 3 or len(trio) != 3 or trio in seen:
            continue
        seen.add(trio)
        try:
            planar.r3_site(d, *trio)
        except DiagramError:
            continue
        yield MovieEvent("r3", trio, (("variant", "over"),))


def advance(d: Diagram, ev: MovieEvent) -> Diagram:
    """The diagram after ``ev``, without building its chain map."""
    k, site = ev.kind, ev.site
    if k in ("r1+", "r1-"):
        return planar.remove_kink(d, site[0], site[1]).post
    if k == "r2-":
        return planar.remove_bigon(d, *site).post
    if k == "r3":
        return planar.r3(d, *site).post
    if k == "death":
        return planar.death(d, site[0]).post
    if k == "saddle":
        return planar.saddle(d, site[0], site[1]).post
    raise SimplifyError(f"cannot advance through {k}")


def _unstick(d: Diagram, depth: int):
    queue = deque([(d, [])])
    seen = {d}
    while queue:
        cur, path = queue.popleft()
        if path and next(shrinking_moves(cur), None) is not None:
            return path
        if len(path) >= depth:
            continue
        for ev in r3_moves(cur):
            try:
                nxt = advance(cur, ev)
            except DiagramError:
                continue
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, path + [ev]))
    return None


def simplify(d: Diagram, depth: int = 4, deaths: bool = True) -> list[MovieEvent]:
    """Events taking ``d`` to the empty diagram (or to its loops if ``deaths`` is off)."""
    events: list[MovieEvent] = []
    while d.n:
        ev = next(shrinking_moves(d), None)
        if ev is None:
            path = _unstick(d, depth)
            if path is None:
                raise SimplifyError(f"stuck at {d.n} crossings")
            for step in path:
                d = advance(d, step)
            events += path
            continue
        d = advance(d, ev)
        events.append(ev)
    if deaths:
        events += [MovieEvent("death", (k,)) for k in sorted(d.loops)]
    return events
