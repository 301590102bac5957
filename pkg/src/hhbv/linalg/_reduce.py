"""Pure-Python fraction-free sparse row reduction.

This is the reference implementation of the reduction kernel; the compiled
module ``_kernels`` implements the same algorithm on int64 with overflow
checks.  Rows are pairs of parallel lists ``(cols, vals)`` with strictly
increasing columns and nonzero integer values.
"""

from math import gcd

__all__ = ["reduce_rows"]


def _normalize(cols, vals):
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            return cols, vals
    if g > 1:
        vals = [v // g for v in vals]
    return cols, vals


def _combine(ca, a_cols, a_vals, cb, b_cols, b_vals):
    """Return ``ca*a - cb*b`` reduced by its content."""
    out_c = []
    out_v = []
    i = j = 0
    na, nb = len(a_cols), len(b_cols)
    while i < na and j < nb:
        ci, cj = a_cols[i], b_cols[j]
        if ci == cj:
            v = ca * a_vals[i] - cb * b_vals[j]
            if v:
                out_c.append(ci)
                out_v.append(v)
            i += 1
            j += 1
        elif ci < cj:
            out_c.append(ci)
            out_v.append(ca * a_vals[i])
            i += 1
        else:
            out_c.append(cj)
            out_v.append(-cb * b_vals[j])
            j += 1
    while i < na:
        out_c.append(a_cols[i])
        out_v.append(ca * a_vals[i])
        i += 1
    while j < nb:
        out_c.append(b_cols[j])
        out_v.append(-cb * b_vals[j])
        j += 1
    return _normalize(out_c, out_v)


def _eliminate(row, col, pivot_row):
    """Clear ``row`` at ``col`` using ``pivot_row`` whose lead column is ``col``."""
    cols, vals = row
    pc, pv = pivot_row
    k = cols.index(col)
    a, b = pv[0], vals[k]
    g = gcd(a, b)
    return _combine(a // g, cols, vals, b // g, pc, pv)


def reduce_rows(rows, ncols):
    """Fully reduce integer rows.

    Returns ``(pivots, reduced)`` where ``reduced[i]`` has its lead entry at
    ``pivots[i]`` (positive), zeros at every other pivot column, and
    ``pivots`` is strictly increasing.
    """
    lead_of = {}
    stored = []
    for cols, vals in rows:
        cols, vals = list(cols), list(vals)
        while cols:
            k = lead_of.get(cols[0])
            if k is None:
                break
            cols, vals = _eliminate((cols, vals), cols[0], stored[k])
        if not cols:
            continue
        cols, vals = _normalize(cols, vals)
        if vals[0] < 0:
            vals = [-v for v in vals]
        lead_of[cols[0]] = len(stored)
        stored.append((cols, vals))

    order = sorted(range(len(stored)), key=lambda k: stored[k][0][0])
    # descending pass: rows with larger leads are already fully reduced
    for k in reversed(order):
        cols, vals = stored[k]
        lead = cols[0]
        targets = [c for c in cols[1:] if c in lead_of]
        for c in targets:
            if c in cols:
                cols, vals = _eliminate((cols, vals), c, stored[lead_of[c]])
        if vals[0] < 0:
            vals = [-v for v in vals]
        stored[k] = (cols, vals)
        assert cols[0] == lead
    pivots = [stored[k][0][0] for k in order]
    return pivots, [stored[k] for k in order]
