"""Normalized Hochschild complexes as sparse matrices.

With the unit as basis element 0, normalized cochains are the tensors
supported on arguments ``>= 1`` (a subcomplex) and normalized chains are the
quotient by tuples carrying a unit argument.  Both have basis
``(n-1)^k * m`` and are indexed in row-major order.
"""

from fractions import Fraction
from itertools import product

from ..linalg import SparseMatrix
from .chains import Chain, Cochain, _cob_sparse, _chb_sparse, connes_boundary

__all__ = ["NormalizedBasis", "cochain_matrix", "chain_matrix", "connes_matrix"]


class NormalizedBasis:
    """Index bookkeeping for normalized (co)chains of one degree."""

    def __init__(self, n, m, k, chains):
        self.n, self.m, self.k, self.chains = n, m, k, chains
        self.dim = (n - 1) ** k * m if n >= 1 else 0

    def tuples(self):
        if self.chains:
            for u in range(self.m):
                for args in product(range(1, self.n), repeat=self.k):
                    yield (u,) + args
        else:
            for args in product(range(1, self.n), repeat=self.k):
                for u in range(self.m):
                    yield args + (u,)

    def index(self, t):
        """Row-major index of a full tuple, or None when degenerate."""
        if self.chains:
            u, args = t[0], t[1:]
        else:
            u, args = t[-1], t[:-1]
        i = 0
        for a in args:
            if a == 0:
                return None
            i = i * (self.n - 1) + (a - 1)
        if self.chains:
            return u * (self.n - 1) ** self.k + i
        return i * self.m + u

    def tuple_of(self, idx):
        if self.chains:
            u, i = divmod(idx, (self.n - 1) ** self.k)
        else:
            i, u = divmod(idx, self.m)
        args = []
        for _ in range(self.k):
            i, a = divmod(i, self.n - 1)
            args.append(a + 1)
        args = tuple(reversed(args))
        return ((u,) + args) if self.chains else (args + (u,))

    def to_vector(self, x):
        """Coordinates of a Cochain/Chain (degenerate tuples dropped)."""
        out = {}
        for t, v in x.sparse().items():
            i = self.index(t)
            if i is not None and v:
                out[i] = out.get(i, 0) + v
        return {i: v for i, v in out.items() if v}

    def from_vector(self, vec, algebra, module):
        data = {self.tuple_of(i): Fraction(v) for i, v in vec.items() if v}
        cls = Chain if self.chains else Cochain
        return cls(algebra, module, self.k, data)

    def embed_dense(self, vec, algebra, module):
        cls = Chain if self.chains else Cochain
        x = cls(algebra, module, self.k, {self.tuple_of(i): Fraction(v) for i, v in vec.items() if v})
        return x.as_dense()


def cochain_matrix(A, M, p):
    """Matrix of ``b: C^p_norm -> C^{p+1}_norm``."""
    src = NormalizedBasis(A.dim, M.dim, p, chains=False)
    dst = NormalizedBasis(A.dim, M.dim, p + 1, chains=False)
    ents = []
    for j, t in enumerate(src.tuples()):
        img = _cob_sparse({t: Fraction(1)}, A, M, p)
        for tt, v in img.items():
            i = dst.index(tt)
            if i is None:
                raise AssertionError("normalized cochains are not a subcomplex")
            ents.append((i, j, v))
    return SparseMatrix(dst.dim, src.dim, ents)


def chain_matrix(A, M, r):
    """Matrix of ``b: C_r_norm -> C_{r-1}_norm``."""
    src = NormalizedBasis(A.dim, M.dim, r, chains=True)
    dst = NormalizedBasis(A.dim, M.dim, r - 1, chains=True)
    acc = {}
    for j, t in enumerate(src.tuples()):
        for tt, v in _chb_sparse({t: Fraction(1)}, A, M, r).items():
            i = dst.index(tt)
            if i is not None:
                acc[(i, j)] = acc.get((i, j), 0) + v
    return SparseMatrix(dst.dim, src.dim, [(i, j, v) for (i, j), v in acc.items() if v])


def connes_matrix(A, M, r):
    """Matrix of the normalized ``B: C_r_norm -> C_{r+1}_norm``."""
    src = NormalizedBasis(A.dim, M.dim, r, chains=True)
    dst = NormalizedBasis(A.dim, M.dim, r + 1, chains=True)
    acc = {}
    for j, t in enumerate(src.tuples()):
        z = Chain(A, M, r, {t: Fraction(1)})
        for tt, v in connes_boundary(z, dense=False).coeffs.items():
            i = dst.index(tt)
            if i is not None:
                acc[(i, j)] = acc.get((i, j), 0) + v
    return SparseMatrix(dst.dim, src.dim, [(i, j, v) for (i, j), v in acc.items() if v])

