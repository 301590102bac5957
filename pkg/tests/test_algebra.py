import json

import numpy as np
import pytest

from hhbv.algebra import (
    BUILTIN_ALGEBRAS,
    AlgebraPresentation,
    Bimodule,
    InvariantError,
    UnknownName,
    bimodule_tensor_over_A,
    builtin_algebra,
    enveloping,
    enveloping_bimodule,
    load_algebra,
    regular_bimodule,
    twisted_bimodule,
)

NAMES = sorted(BUILTIN_ALGEBRAS)


@pytest.mark.parametrize("name", NAMES)
def test_builtins_are_unital_associative_with_unit_first(name):
    A = builtin_algebra(name)
    A.check()
    assert A.unit_is_first
    regular_bimodule(A).check()


@pytest.mark.parametrize("name", NAMES)
def test_json_round_trip(name, tmp_path):
    A = builtin_algebra(name)
    p = tmp_path / "a.json"
    p.write_text(json.dumps(A.to_json_obj()))
    B = load_algebra(p)
    assert np.all(B.mul == A.mul) and np.all(B.unit == A.unit)


def test_unknown_builtin():
    with pytest.raises(UnknownName):
        builtin_algebra("nope")


def test_non_associative_rejected_with_named_invariant():
    mul = np.zeros((2, 2, 2), dtype=int)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 0] = 1
    with pytest.raises(InvariantError, match="associativity"):
        AlgebraPresentation(mul, [1, 0])


def test_with_unit_first_moves_unit():
    A = builtin_algebra("product_QxQ")
    # basis (e, 1 - e): unit is e_0 + e_1
    B = A.change_basis([[0, 1], [1, -1]])
    assert not B.unit_is_first
    C, _ = B.with_unit_first()
    assert C.unit_is_first
    C.check()


def test_commutativity_flags():
    assert builtin_algebra("dual_numbers").is_commutative()
    assert not builtin_algebra("mat2").is_commutative()


def test_enveloping_dimension_and_unit():
    A = builtin_algebra("upper_triangular_2")
    E = enveloping(A)
    assert E.dim == 9
    E.check()


def test_outer_and_inner_enveloping_bimodules_are_bimodules():
    A = builtin_algebra("mat2")
    enveloping_bimodule(A).check()
    enveloping_bimodule(A, inner=True).check()


def test_twisted_bimodule_needs_automorphism():
    A = builtin_algebra("group_algebra_C3")
    # g -> g^2 is an automorphism of Q[C3]
    phi = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=object)
    twisted_bimodule(A, phi).check()
    bad = np.array([[1, 0, 0], [0, 1, 1], [0, 0, 1]], dtype=object)
    with pytest.raises(InvariantError):
        twisted_bimodule(A, bad)


def test_tensor_with_regular_is_identity_size():
    A = builtin_algebra("upper_triangular_2")
    T = bimodule_tensor_over_A(regular_bimodule(A), regular_bimodule(A))
    assert T.bimodule.dim == A.dim


def test_bimodule_bad_shape():
    A = builtin_algebra("field")
    with pytest.raises(InvariantError):
        Bimodule(A, np.zeros((1, 2, 2), dtype=object), np.zeros((1, 1, 1), dtype=object))
