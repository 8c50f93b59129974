"""Sparse integer linear algebra: Smith invariants and exact solving.

Matrices are dicts ``row -> {col: value}``.  Unit pivots are eliminated first
(Khovanov differentials are mostly made of them); whatever is left goes to a
dense Smith normal form.
"""
from __future__ import annotations

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as _dense_invariants
from sympy.polys.matrices.normalforms import smith_normal_decomp

_RHS = object()


def _copy(rows):
    return {r: dict(v) for r, v in rows.items() if v}


def _column_index(rows):
    cols: dict = {}
    for r, row in rows.items():
        for c in row:
            if c is not _RHS:
                cols.setdefault(c, set()).add(r)
    return cols


def _eliminate_units(rows, cols, record=None):
    """Eliminate unit pivots in place; returns how many were used."""
    used = 0
    while True:
        progress = False
        for c in sorted(cols, key=lambda c: len(cols[c])):
            if c not in cols:
                continue
            best = None
            for r in cols[c]:
                v = rows[r][c]
                if v == 1 or v == -1:
                    if best is None or len(rows[r]) < len(rows[best]):
                        best = r
            if best is None:
                continue
            r = best
            v = rows[r][c]
            prow = rows.pop(r)
            for c2 in prow:
                if c2 is not _RHS:
                    cols[c2].discard(r)
            for r2 in list(cols[c]):
                row2 = rows[r2]
                f = row2[c] * v
                for c2, x in prow.items():
                    nv = row2.get(c2, 0) - f * x
                    if nv:
                        if c2 not in row2 and c2 is not _RHS:
                            cols[c2].add(r2)
                        row2[c2] = nv
                    elif c2 in row2:
                        del row2[c2]
                        if c2 is not _RHS:
                            cols[c2].discard(r2)
                if not row2:
                    del rows[r2]
            del cols[c]
            for c2 in [k for k in prow if k is not _RHS and k in cols and not cols[k]]:
                del cols[c2]
            if record is not None:
                record.append((c, v, prow))
            used += 1
            progress = True
        if not progress:
            return used


def _dense(rows, cols):
    rkeys = sorted(rows)
    ckeys = sorted(cols)
    cpos = {c: j for j, c in enumerate(ckeys)}
    data = [[ZZ(0)] * len(ckeys) for _ in rkeys]
    for i, r in enumerate(rkeys):
        for c, v in rows[r].items():
            if c is not _RHS:
                data[i][cpos[c]] = ZZ(v)
    return rkeys, ckeys, DomainMatrix(data, (len(rkeys), len(ckeys)), ZZ)


def invariant_factors(rows: dict) -> list[int]:
    """Nonzero Smith invariant factors of a sparse integer matrix (length = rank)."""
    rows = _copy(rows)
    cols = _column_index(rows)
    units = _eliminate_units(rows, cols)
    out = [1] * units
    if rows:
        _, _, m = _dense(rows, cols)
        out.extend(abs(int(x)) for x in _dense_invariants(m) if x != 0)
    return sorted(out)


def rank(rows: dict) -> int:
    return len(invariant_factors(rows))


def solve(rows: dict, rhs: dict):
    """An integer vector y with ``A y = rhs``, or None when none exists.

    ``rows`` maps row keys to ``{col: value}``; ``rhs`` maps row keys to
    integers.  The result maps column keys to nonzero integers.
    """
    work = {}
    for r, row in rows.items():
        if row:
            work[r] = dict(row)
    for r, v in rhs.items():
        if v:
            work.setdefault(r, {})[_RHS] = v
    cols = _column_index(work)
    record = []
    _eliminate_units(work, cols, record)
    y: dict = {}
    if work:
        live = {r: row for r, row in work.items() if any(c is not _RHS for c in row)}
        for r, row in work.items():
            if r not in live and row.get(_RHS, 0):
                return None
        if live:
            rkeys, ckeys, m = _dense(live, cols)
            s, u, t = smith_normal_decomp(m)
            b = [ZZ(live[r].get(_RHS, 0)) for r in rkeys]
            ub = [sum((u[i, k].element * b[k] for k in range(len(b))), ZZ(0))
                  for i in range(len(rkeys))]
            z = [ZZ(0)] * len(ckeys)
            for i in range(len(rkeys)):
                d = s[i, i].element if i < len(ckeys) else ZZ(0)
                if d == 0:
                    if ub[i] != 0:
                        return None
                else:
                    if ub[i] % d:
                        return None
                    z[i] = ub[i] // d
            for j, c in enumerate(ckeys):
                val = sum((t[j, k].element * z[k] for k in range(len(ckeys))), ZZ(0))
                if val:
                    y[c] = int(val)
    for c, v, prow in reversed(record):
        acc = prow.get(_RHS, 0)
        for c2, x in prow.items():
            if c2 is not _RHS and c2 != c:
                acc -= x * y.get(c2, 0)
        val = v * acc
        if val:
            y[c] = val
        else:
            y.pop(c, None)
    return y
