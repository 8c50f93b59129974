"""Kauffman bracket and the unnormalized Jones polynomial.

Kept deliberately separate from the chain complex: loops are counted on a
graph of crossing endpoints with networkx, and the bracket is built in the
variable A before being converted to q.  It serves as an oracle for the
graded Euler characteristic.
"""
from __future__ import annotations

from collections import defaultdict

import networkx as nx

from .diagram import Diagram


def _loop_count(d: Diagram, state: int) -> int:
    g = nx.Graph()
    for i, c in enumerate(d.crossings):
        for k in range(4):
            g.add_node((i, k))
        if (state >> i) & 1:
            g.add_edge((i, 0), (i, 3))
            g.add_edge((i, 1), (i, 2))
        else:
            g.add_edge((i, 0), (i, 1))
            g.add_edge((i, 2), (i, 3))
    ends = defaultdict(list)
    for i, c in enumerate(d.crossings):
        for k, a in enumerate(c.arcs):
            ends[a].append((i, k))
    for a, (u, v) in ends.items():
        g.add_edge(u, v)
    return nx.number_connected_components(g) + len(d.loops)


def kauffman_bracket(d: Diagram) -> dict[int, int]:
    """<D> in A with <O> = -A^2 - A^-2 per loop; A-smoothing is the 0-smoothing."""
    delta = {2: -1, -2: -1}
    out: dict[int, int] = defaultdict(int)
    for state in range(1 << d.n):
        ones = bin(state).count("1")
        term = {d.n - 2 * ones: 1}
        for _ in range(_loop_count(d, state)):
            nxt: dict[int, int] = defaultdict(int)
            for e, c in term.items():
                for e2, c2 in delta.items():
                    nxt[e + e2] += c * c2
            term = nxt
        for e, c in term.items():
            out[e] += c
    return {e: c for e, c in sorted(out.items()) if c}


def unnormalized_jones(d: Diagram) -> dict[int, int]:
    """(-1)^{n-} q^{n+ - 2n-} times the bracket evaluated at A = (-q)^(-1/2)."""
    npos = sum(1 for c in d.crossings if c.sign > 0)
    nneg = sum(1 for c in d.crossings if c.sign < 0)
    out: dict[int, int] = defaultdict(int)
    for e, c in kauffman_bracket(d).items():
        # (-q)^{n/2} A^e  ->  (-q)^{(n - e)/2}
        k = (d.n - e) // 2
        out[k + npos - 2 * nneg] += -c if (k + nneg) % 2 else c
    return {e: c for e, c in sorted(out.items()) if c}
