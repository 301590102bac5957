"""Quotients Z/B of subspaces with an explicit section."""

from fractions import Fraction

from .elim import rref
from .sparse import SparseMatrix, dense_vector

__all__ = ["SubquotientSpace", "subquotient", "ContainmentError", "NotACycle"]


class ContainmentError(ValueError):
    """The boundary span is not contained in the cycle span."""


class NotACycle(ValueError):
    """A vector handed to ``class_of`` does not lie in the cycle span."""


class SubquotientSpace:
    """``Z/B`` inside ``Q^ambient_dim``.

    ``class_basis`` are ambient vectors whose classes form a basis of the
    quotient; ``class_of`` gives coordinates in that basis.
    """

    def __init__(self, ambient_dim, cycle_basis, boundary_basis, *, check=True):
        self.ambient_dim = ambient_dim
        self.cycle_basis = cycle_basis
        self.boundary_basis = boundary_basis
        zs = cycle_basis.column_dicts()
        bs = boundary_basis.column_dicts()
        self._B = rref(bs, ambient_dim)
        ez = rref(zs, ambient_dim)
        if check:
            for j, b in enumerate(bs):
                if not ez.contains(b):
                    raise ContainmentError(f"boundary column {j} is not a cycle")
        residuals = [self._B.reduce(z)[0] for z in zs]
        self._C = rref(residuals, ambient_dim)
        self.rank_cycles = ez.rank
        self.rank_boundaries = self._B.rank
        if self._C.rank != ez.rank - self._B.rank:
            raise ContainmentError("quotient dimension mismatch")

    @property
    def dim(self):
        return self._C.rank

    @property
    def class_basis(self):
        return [dict(r) for r in self._C.rows]

    def class_of(self, v):
        """Coordinates of the class of the cycle ``v`` (list of Fractions)."""
        r, _ = self._B.reduce(v)
        r2, coeffs = self._C.reduce(r)
        if r2:
            raise NotACycle("vector is not in the cycle span")
        out = [Fraction(0)] * self.dim
        for i, a in coeffs.items():
            out[i] = a
        return out

    def is_boundary(self, v):
        return not self._B.reduce(v)[0]

    def lift_of(self, coords, dense=False):
        """Representative cycle of the class with the given coordinates."""
        acc = {}
        for a, row in zip(coords, self._C.rows):
            if a:
                for c, x in row.items():
                    acc[c] = acc.get(c, 0) + a * x
        acc = {c: x for c, x in acc.items() if x}
        return dense_vector(acc, self.ambient_dim) if dense else acc

    def section_matrix(self):
        return SparseMatrix.from_columns(self.ambient_dim, self.class_basis)

    def __repr__(self):
        return f"SubquotientSpace(ambient={self.ambient_dim}, dim={self.dim})"


def subquotient(cycles, boundaries):
    """Build ``Z/B`` from column spans; raises ContainmentError when ``B`` is not in ``Z``."""
    if cycles.rows != boundaries.rows:
        raise ValueError("ambient dimensions differ")
    return SubquotientSpace(cycles.rows, cycles, boundaries)

