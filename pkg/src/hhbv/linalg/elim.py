"""Exact reduced row echelon forms and the derived solvers.

The reduction kernel is the compiled ``_kernels`` module when it is importable
and the data fits in int64.  When fraction-free growth overflows int64 the
compiled path reduces modulo a 61-bit prime, lifts the result by rational
reconstruction and certifies it exactly against the input rows.  Otherwise (or
when ``HHBV_PURE_PYTHON=1``) the pure-Python kernel in ``_reduce`` is used.
All paths return identical results.
"""

import os
from fractions import Fraction
from math import isqrt, lcm

import numpy as np

from . import _reduce
from .sparse import SparseMatrix, sparse_vector

try:  # pragma: no cover - depends on the build
    from . import _kernels
except ImportError:  # pragma: no cover
    _kernels = None

__all__ = [
    "Echelon",
    "rref",
    "rank",
    "kernel_basis",
    "image_basis",
    "solve",
    "solve_many",
    "backend_name",
    "HAVE_COMPILED",
]

HAVE_COMPILED = _kernels is not None
_INT64_SAFE = 1 << 62
_PRIME = (1 << 61) - 1


def _use_compiled():
    return HAVE_COMPILED and os.environ.get("HHBV_PURE_PYTHON", "") not in ("1", "true", "yes")


def backend_name():
    return "cython" if _use_compiled() else "python"


def _integer_rows(rows):
    """Scale each rational row ``{col: value}`` to a primitive integer row."""
    out = []
    big = 0
    for row in rows:
        items = sorted((c, v) for c, v in row.items() if v != 0)
        if not items:
            continue
        den = 1
        for _, v in items:
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        cols = [c for c, _ in items]
        vals = [int(v * den) for _, v in items]
        big = max(big, max(abs(v) for v in vals))
        out.append((cols, vals))
    return out, big


def _reduce_integer_rows(irows, ncols, big, backend=None):
    backend = backend or ("cython" if _use_compiled() else "python")
    if backend == "cython" and big < _INT64_SAFE:
        arr = [(np.asarray(c, dtype=np.int64), np.asarray(v, dtype=np.int64)) for c, v in irows]
        try:
            piv, red = _kernels.reduce_rows(arr, ncols)
            return piv, [(c.tolist(), v.tolist()) for c, v in red]
        except OverflowError:
            pass
        lifted = _modular_reduce(irows, ncols)
        if lifted is not None:
            return lifted
    return _reduce.reduce_rows(irows, ncols)


def _ratrecon(a, p):
    """``n/d`` with ``n/d = a mod p`` and ``|n|, d <= sqrt(p/2)``, or None."""
    bound = isqrt(p // 2)
    r0, r1, t0, t1 = p, a, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    return Fraction(r1, t1)


def _modular_reduce(irows, ncols, p=_PRIME):
    """Candidate RREF mod ``p``, lifted to Q and verified exactly; None on failure.

    The candidate is accepted only if every input row lies in its row space.
    Its rank is the rank mod ``p``, which never exceeds the rank over Q, so
    the two row spaces agree and the reduced form is the unique one.
    """
    arr = [(np.asarray(c, dtype=np.int64), np.asarray([v % p for v in vals], dtype=np.int64))
           for c, vals in irows]
    piv, red = _kernels.reduce_rows_mod(arr, ncols, p)
    rows = []
    for cols, vals in red:
        row = {}
        for c, v in zip(cols.tolist(), vals.tolist()):
            q = _ratrecon(v, p)
            if q is None:
                return None
            row[c] = q
        rows.append(row)
    pos = {c: i for i, c in enumerate(piv)}
    for cols, vals in irows:
        v = dict(zip(cols, vals))
        for c in sorted(c for c in v if c in pos):
            a = v.get(c, 0)
            if not a:
                continue
            for k, x in rows[pos[c]].items():
                y = v.get(k, 0) - a * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        if v:
            return None
    out = []
    for row in rows:
        den = 1
        for x in row.values():
            den = lcm(den, x.denominator)
        cols = sorted(row)
        out.append((cols, [int(row[c] * den) for c in cols]))
    return piv, out


class Echelon:
    """Reduced row echelon form of a row space.

    ``rows[i]`` is a dict with ``rows[i][pivots[i]] == 1`` and zero at every
    other pivot column.
    """

    __slots__ = ("ncols", "pivots", "rows", "_pivot_pos")

    def __init__(self, ncols, pivots, rows):
        self.ncols = ncols
        self.pivots = tuple(pivots)
        self.rows = tuple(rows)
        self._pivot_pos = {p: i for i, p in enumerate(self.pivots)}

    @property
    def rank(self):
        return len(self.pivots)

    def free_columns(self):
        return [c for c in range(self.ncols) if c not in self._pivot_pos]

    def reduce(self, v):
        """Return ``(residual, coeffs)`` with ``v = residual + sum coeffs[i] * rows[i]``.

        The residual vanishes at every pivot column.
        """
        v = dict(sparse_vector(v))
        coeffs = {}
        for p in [p for p in self.pivots if p in v]:
            a = v.get(p, 0)
            if not a:
                continue
            i = self._pivot_pos[p]
            coeffs[i] = a
            for c, x in self.rows[i].items():
                y = v.get(c, 0) - a * x
                if y:
                    v[c] = y
                else:
                    v.pop(c, None)
        return v, coeffs

    def contains(self, v):
        return not self.reduce(v)[0]

    def as_matrix(self):
        return SparseMatrix.from_rows(self.ncols, list(self.rows))


def rref(rows, ncols, backend=None):
    """Echelon form of the span of ``rows`` (dicts or sequences) in ``Q^ncols``."""
    rows = [sparse_vector(r) for r in rows]
    irows, big = _integer_rows(rows)
    piv, red = _reduce_integer_rows(irows, ncols, big, backend)
    out = []
    for cols, vals in red:
        lead = vals[0]
        out.append({c: Fraction(v, lead) for c, v in zip(cols, vals)})
    return Echelon(ncols, piv, out)


def _rows_of(m):
    if isinstance(m, SparseMatrix):
        return m.row_dicts(), m.cols
    m = np.asarray(m, dtype=object)
    return [sparse_vector(r) for r in m], m.shape[1]


def rank(m, backend=None):
    rows, ncols = _rows_of(m)
    return rref(rows, ncols, backend).rank


def kernel_basis(m, backend=None):
    """Columns of the result form a basis of ``ker(m)``."""
    rows, ncols = _rows_of(m)
    e = rref(rows, ncols, backend)
    cols = []
    for f in e.free_columns():
        v = {f: Fraction(1)}
        for p, row in zip(e.pivots, e.rows):
            x = row.get(f)
            if x:
                v[p] = -x
        cols.append(v)
    return SparseMatrix.from_columns(ncols, cols)


def image_basis(m, backend=None):
    """Columns of the result form a basis of the column space of ``m`` (in echelon form)."""
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix.from_dense(m)
    e = rref(m.column_dicts(), m.rows, backend)
    return SparseMatrix.from_columns(m.rows, list(e.rows))


def solve_many(m, targets, backend=None):
    """Solve ``m x = t`` for each target; unsolvable targets give ``None``.

    Free variables are set to zero, so the answer is deterministic.
    """
    rows, n = _rows_of(m)
    targets = [sparse_vector(t) for t in targets]
    k = len(targets)
    aug = [dict(r) for r in rows]
    for j, t in enumerate(targets):
        for i, x in t.items():
            if i >= len(aug):
                raise ValueError("target length does not match the row count")
            aug[i][n + j] = x
    e = rref(aug, n + k, backend)
    bad = set()
    sols = [dict() for _ in range(k)]
    for p, row in zip(e.pivots, e.rows):
        if p >= n:
            bad.update(c - n for c in row)
            continue
        for c, x in row.items():
            if c >= n:
                sols[c - n][p] = x
    return [None if j in bad else sols[j] for j in range(k)]


def solve(m, target, backend=None):
    rows, _ = _rows_of(m)
    if not isinstance(target, dict) and len(target) != len(rows):
        raise ValueError("target length does not match the row count")
    x = solve_many(m, [target], backend)[0]
    if x is None:
        return None
    ncols = m.cols if isinstance(m, SparseMatrix) else np.asarray(m, dtype=object).shape[1]
    out = [Fraction(0)] * ncols
    for i, v in x.items():
        out[i] = v
    return out
