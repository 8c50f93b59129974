"""Evaluating planar genus-zero cobordisms between resolved diagrams.

A surface between two loop sets is described by which source arcs survive
into which target arcs.  Loops sharing surviving material lie on the same
connected component.  Every component is a sphere with holes; its value in
the Frobenius algebra Z[x]/(x^2) is the product of its incoming labels,
times 2x per dot, pushed out through the comultiplication.
"""
from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .diagram import LoopSet


class ParityError(ArithmeticError):
    """An odd coefficient where the dot-difference rule needs an even one."""


class Surface:
    """A compiled cobordism from ``src`` loops to ``dst`` loops.

    ``corr`` maps a source arc to the target arcs its material ends up in
    (missing or empty means the arc is capped off inside the surface).
    ``dots`` lists arcs (of either end) carrying one dot each; a dot on a
    source arc is marked with ``("in", arc)`` and on a target arc with
    ``("out", arc)``.
    """

    __slots__ = ("components", "nsrc", "ndst", "chi")

    def __init__(self, src: LoopSet, dst: LoopSet, corr: Mapping[int, Iterable[int]] | Callable,
                 dots: Iterable[tuple[str, int]] = ()):
        ns, nd = len(src), len(dst)
        parent = list(range(ns + nd))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        get = corr if callable(corr) else (lambda a: corr.get(a, ()))
        for li, arcs in enumerate(src.members):
            for a in arcs:
                for b in get(a) or ():
                    ru, rv = find(li), find(ns + dst.loop_of(b))
                    if ru != rv:
                        parent[ru] = rv
        ndots = {}
        for side, a in dots:
            node = src.loop_of(a) if side == "in" else ns + dst.loop_of(a)
            r = find(node)
            ndots[r] = ndots.get(r, 0) + 1
        comps: dict[int, tuple[list, list]] = {}
        for v in range(ns + nd):
            r = find(v)
            ins, outs = comps.setdefault(r, ([], []))
            (ins if v < ns else outs).append(v if v < ns else v - ns)
        self.components = [(tuple(i), tuple(o), ndots.get(r, 0)) for r, (i, o) in comps.items()]
        self.nsrc, self.ndst = ns, nd
        self.chi = sum(2 - len(i) - len(o) for i, o, _ in self.components)

    def apply(self, labels: int) -> list[tuple[int, int]]:
        """Image of one label mask as ``[(target_mask, coefficient)]``."""
        acc = [(0, 1)]
        for ins, outs, dots in self.components:
            deg = dots
            for j in ins:
                deg += (labels >> j) & 1
            if deg >= 2:
                return []
            coef = 1 << dots
            if not outs:
                if deg == 0:
                    return []
                acc = [(m, c * coef) for m, c in acc]
                continue
            allx = 0
            for j in outs:
                allx |= 1 << j
            if deg == 1:
                acc = [(m | allx, c * coef) for m, c in acc]
            else:
                acc = [(m | (allx & ~(1 << j)), c * coef) for m, c in acc for j in outs]
        return acc


def combine(terms: Iterable[tuple[int, "Surface"]], labels: int, halve: bool = False) -> dict[int, int]:
    """Sum of ``coef * surface(labels)``; with ``halve`` every total must be even."""
    out: dict[int, int] = {}
    for coef, surf in terms:
        for m, c in surf.apply(labels):
            out[m] = out.get(m, 0) + coef * c
    if halve:
        for m, c in out.items():
            if c % 2:
                raise ParityError(f"odd coefficient {c} in a halved dot difference")
        out = {m: c // 2 for m, c in out.items()}
    return {m: c for m, c in out.items() if c}
