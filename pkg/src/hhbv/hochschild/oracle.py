"""Independent dimension oracles for Hochschild (co)homology.

``dense_dims`` builds the unnormalized bar complexes directly from the
structure constants and ranks them with plain dense Fraction elimination; it
shares no code with the sparse engine beyond the algebra data.
"""

from fractions import Fraction
from itertools import product

import numpy as np

from ..algebra import regular_bimodule
from ..duality.resolution import resolution_cohomology, resolution_homology
from ..linalg import dense_rank
from .table import compute_table

__all__ = ["dense_dims", "oracle_compare"]


def _zeros(r, c):
    a = np.empty((r, c), dtype=object)
    a[...] = Fraction(0)
    return a


def _coboundary(A, M, p):
    """``C^p -> C^{p+1}`` on all cochains, rows and columns over ``(args, value)``."""
    n, m = A.dim, M.dim
    src = list(product(range(n), repeat=p))
    dst = list(product(range(n), repeat=p + 1))
    spos = {t: i for i, t in enumerate(src)}
    mat = _zeros(len(dst) * m, len(src) * m)
    for ti, t in enumerate(dst):
        # (bf)(a_1..a_{p+1}) = a_1 f(a_2..) + sum (-1)^i f(.., a_i a_{i+1}, ..) + (-1)^{p+1} f(..a_p) a_{p+1}
        for v in range(m):
            col = spos[t[1:]] * m
            for w in range(m):
                x = M.left[t[0], v, w]
                if x:
                    mat[ti * m + w, col + v] += x
        for i in range(p):
            for k in range(n):
                x = A.mul[t[i], t[i + 1], k]
                if x:
                    s = t[:i] + (k,) + t[i + 2:]
                    for v in range(m):
                        mat[ti * m + v, spos[s] * m + v] += (-1) ** (i + 1) * Fraction(x)
        for v in range(m):
            col = spos[t[:-1]] * m
            for w in range(m):
                x = M.right[v, t[-1], w]
                if x:
                    mat[ti * m + w, col + v] += (-1) ** (p + 1) * Fraction(x)
    return mat


def _boundary(A, M, r):
    """``C_r -> C_{r-1}`` on all chains ``(m, a_1..a_r)``."""
    n, m = A.dim, M.dim
    src = list(product(range(n), repeat=r))
    dst = list(product(range(n), repeat=r - 1))
    dpos = {t: i for i, t in enumerate(dst)}
    mat = _zeros(len(dst) * m, len(src) * m)
    for si, t in enumerate(src):
        for v in range(m):
            col = si * m + v
            # m a_1 (x) a_2..
            for w in range(m):
                x = M.right[v, t[0], w]
                if x:
                    mat[dpos[t[1:]] * m + w, col] += x
            for i in range(r - 1):
                for k in range(n):
                    x = A.mul[t[i], t[i + 1], k]
                    if x:
                        s = t[:i] + (k,) + t[i + 2:]
                        mat[dpos[s] * m + v, col] += (-1) ** (i + 1) * Fraction(x)
            for w in range(m):
                x = M.left[t[-1], v, w]
                if x:
                    mat[dpos[t[:-1]] * m + w, col] += (-1) ** r * Fraction(x)
    return mat


def dense_dims(A, M=None, P=6):
    """``(cohomology dims, homology dims)`` in degrees ``0..P-1`` from the unnormalized complexes."""
    M = M if M is not None else regular_bimodule(A)
    n, m = A.dim, M.dim
    rk_co = {p: dense_rank(_coboundary(A, M, p)) for p in range(P)}
    rk_ch = {r: dense_rank(_boundary(A, M, r)) for r in range(1, P + 1)}
    coh = [n ** p * m - rk_co[p] - (rk_co[p - 1] if p else 0) for p in range(P)]
    hom = [n ** r * m - rk_ch[r + 1] - (rk_ch[r] if r else 0) for r in range(P)]
    return coh, hom


def oracle_compare(A, P=6, resolution=None):
    """Compare the sparse engine, the dense oracle and (when given) a resolution.

    Returns a dict with the three dimension lists and ``agree``.
    """
    M = regular_bimodule(A)
    t = compute_table(A, M, P)
    sparse = (list(t.coh_dims), list(t.hom_dims))
    dense = dense_dims(A, M, P)
    out = {
        "algebra": A.name,
        "P": P,
        "sparse": {"cohomology": sparse[0], "homology": sparse[1]},
        "dense": {"cohomology": dense[0], "homology": dense[1]},
    }
    agree = sparse == tuple(dense)
    if resolution is not None:
        # a truncated resolution is exact only below its top; a finite one is zero above it
        L = resolution.length
        degs = list(range(min(P, L))) if resolution.truncated else list(range(P))
        inside = [i for i in degs if i <= L]
        hc = resolution_cohomology(resolution, M, inside)
        hh = resolution_homology(resolution, M, inside)
        rc = [hc[p].dim if p in hc else 0 for p in degs]
        rh = [hh[r].dim if r in hh else 0 for r in degs]
        out["resolution"] = {"name": resolution.name, "degrees": degs, "cohomology": rc, "homology": rh}
        agree = agree and rc == sparse[0][:len(degs)] and rh == sparse[1][:len(degs)]
    out["agree"] = agree
    return out
