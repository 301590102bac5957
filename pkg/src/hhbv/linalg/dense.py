"""Independent dense Gaussian elimination over Fractions.

Deliberately naive (textbook partial pivoting on the first nonzero entry,
no shared code with the sparse kernels) so it can serve as a cross-check.
"""

from fractions import Fraction

__all__ = ["dense_rref", "dense_rank", "dense_nullity", "dense_kernel"]


def _copy(a):
    return [[Fraction(x) for x in row] for row in a]


def dense_rref(a):
    """Return ``(R, pivots)`` with ``R`` the reduced row echelon form of ``a``."""
    m = _copy(a)
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def dense_rank(a):
    return len(dense_rref(a)[1])


def dense_nullity(a, ncols=None):
    if ncols is None:
        ncols = len(a[0]) if len(a) else 0
    return ncols - (dense_rank(a) if len(a) else 0)


def dense_kernel(a, ncols=None):
    """List of kernel basis vectors (dense lists)."""
    if ncols is None:
        ncols = len(a[0])
    if not len(a):
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, piv = dense_rref(a)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -r[i][f]
        out.append(v)
    return out
