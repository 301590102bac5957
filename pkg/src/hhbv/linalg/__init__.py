"""Exact linear algebra over the rationals."""

from .dense import dense_kernel, dense_nullity, dense_rank, dense_rref
from .elim import (
    HAVE_COMPILED,
    Echelon,
    backend_name,
    image_basis,
    kernel_basis,
    rank,
    rref,
    solve,
    solve_many,
)
from .rational import Fraction, format_rational, is_integral, parse_rational, to_fraction
from .sparse import SparseMatrix, dense_vector, sparse_vector
from .subquotient import ContainmentError, NotACycle, SubquotientSpace, subquotient

__all__ = [
    "HAVE_COMPILED", "Echelon", "backend_name", "image_basis", "kernel_basis", "rank", "rref",
    "solve", "solve_many", "Fraction", "format_rational", "is_integral", "parse_rational",
    "to_fraction", "SparseMatrix", "dense_vector", "sparse_vector", "ContainmentError",
    "NotACycle", "SubquotientSpace", "subquotient", "dense_kernel", "dense_nullity",
    "dense_rank", "dense_rref",
]
