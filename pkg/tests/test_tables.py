import json

import pytest

from hhbv.algebra import builtin_algebra, enveloping_bimodule
from hhbv.duality.resolution import builtin_resolution, periodic_dual_numbers_resolution
from hhbv.hochschild.oracle import dense_dims, oracle_compare
from hhbv.hochschild.table import compute_table, export_calculus

# frozen after the dense oracle confirmed them
DUAL_NUMBERS_P6 = [2, 1, 1, 1, 1, 1]


def test_dual_numbers_dims_confirmed_by_dense_oracle():
    A = builtin_algebra("dual_numbers")
    coh, hom = dense_dims(A, P=6)
    assert coh == DUAL_NUMBERS_P6
    assert hom == DUAL_NUMBERS_P6
    t = compute_table(A, P=6)
    assert list(t.coh_dims) == coh and list(t.hom_dims) == hom


def test_dual_numbers_three_way_agreement():
    A = builtin_algebra("dual_numbers")
    rep = oracle_compare(A, 6, periodic_dual_numbers_resolution(6))
    assert rep["agree"]
    assert rep["resolution"]["cohomology"] == DUAL_NUMBERS_P6[: len(rep["resolution"]["degrees"])]


@pytest.mark.parametrize("name", ["field", "product_QxQ", "mat2", "group_algebra_C2", "group_algebra_C3",
                                  "upper_triangular_2"])
def test_finite_resolutions_agree_with_both_engines(name):
    A = builtin_algebra(name)
    rep = oracle_compare(A, 4, builtin_resolution(A))
    assert rep["agree"], rep


@pytest.mark.parametrize("name,coh0", [("field", 1), ("product_QxQ", 2), ("mat2", 1), ("group_algebra_C3", 3),
                                       ("upper_triangular_2", 1)])
def test_separable_and_hereditary_vanish_above_top(name, coh0):
    t = compute_table(builtin_algebra(name), P=4)
    assert t.coh_dims[0] == coh0
    assert all(x == 0 for x in t.coh_dims[2:])


def test_coefficients_in_enveloping_bimodule():
    A = builtin_algebra("upper_triangular_2")
    t = compute_table(A, enveloping_bimodule(A), P=3)
    coh, _ = dense_dims(A, enveloping_bimodule(A), P=3)
    assert list(t.coh_dims) == coh


def test_table_export_is_json_and_stable():
    t = compute_table(builtin_algebra("dual_numbers"), P=4)
    a = json.dumps(t.to_json_obj(), sort_keys=True)
    b = json.dumps(compute_table(builtin_algebra("dual_numbers"), P=4).to_json_obj(), sort_keys=True)
    assert a == b


def test_class_round_trip():
    t = compute_table(builtin_algebra("dual_numbers"), P=4)
    for p in range(4):
        for k, f in enumerate(t.class_basis_cocycles(p)):
            coords = t.class_of_cochain(f)
            assert [int(i == k) for i in range(len(coords))] == coords


def test_exported_calculus_degrees():
    calc = export_calculus(compute_table(builtin_algebra("group_algebra_C2"), P=3))
    assert sorted(set(calc.coh_degrees)) == [0]
