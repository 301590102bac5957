"""Shared fixtures for the test modules."""

import numpy as np

from hhbv.algebra import Bimodule, builtin_algebra, twisted_bimodule

SEMISIMPLE = ["field", "product_QxQ", "mat2", "group_algebra_C2", "group_algebra_C3"]


def character_bimodule(A, chi):
    """``Q`` with ``a.x.b = chi(a) chi(b) x``; not free over ``A^e`` when ``dim A > 1``."""
    L = np.array(chi, dtype=object).reshape(A.dim, 1, 1)
    R = np.array(chi, dtype=object).reshape(1, A.dim, 1)
    return Bimodule(A, L, R, name="chi")


def non_free_module(name):
    A = builtin_algebra(name)
    if name == "mat2":
        # conjugation by the swap E12 + E21 on the basis 1, E11, E12, E21
        phi = np.array([[1, 1, 0, 0], [0, -1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=object)
        return twisted_bimodule(A, phi)
    chi = {"field": [1], "product_QxQ": [1, 1], "group_algebra_C2": [1, 1],
           "group_algebra_C3": [1, 1, 1]}[name]
    return character_bimodule(A, chi)
