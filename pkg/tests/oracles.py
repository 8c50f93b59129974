"""Independent reference computations used only by the tests.

The bracket here walks arcs with a union-find over PD slots and expands
(q + 1/q)^k with binomial coefficients, so it shares no code with the
package's own bracket or chain complex.
"""
from __future__ import annotations

from collections import defaultdict
from math import comb


def _components(pd, loops, state):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for i, (a, b, c, d) in enumerate(pd):
        if (state >> i) & 1:
            union(("arc", a), ("arc", d))
            union(("arc", b), ("arc", c))
        else:
            union(("arc", a), ("arc", b))
            union(("arc", c), ("arc", d))
    roots = {find(("arc", a)) for x in pd for a in x}
    return len(roots) + len(loops)


def bracket(pd, loops=()):
    """State sum sum_s (-q)^|s| (q + 1/q)^loops(s), as {power of q: coefficient}."""
    n = len(pd)
    out = defaultdict(int)
    for state in range(1 << n):
        ones = bin(state).count("1")
        k = _components(pd, loops, state)
        # (q + 1/q)^k = sum_j C(k,j) q^(2j - k)
        for j in range(k + 1):
            out[ones + 2 * j - k] += (-1) ** ones * comb(k, j)
    return {e: c for e, c in sorted(out.items()) if c}


def diagram_jones(d):
    """(-1)^n- q^(n+ - 2n-) times the state sum."""
    pd = [c.arcs for c in d.crossings]
    npos = sum(c.sign > 0 for c in d.crossings)
    nneg = sum(c.sign < 0 for c in d.crossings)
    return {e + npos - 2 * nneg: c * (-1) ** nneg for e, c in bracket(pd, d.loops).items()}
