import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hhbv.groups import (
    GroupResolution,
    LaurentAlgebra,
    LaurentComparison,
    koszul_resolution,
    transfer_resolution,
)
from hhbv.groups.slice import (
    WeightSlice,
    WindowOverflow,
    certify_cy_group,
    ext_transfer,
    group_fundamental_class,
    nonorientable_twist_demo,
    witt_bracket_oracle,
)

exps = st.integers(-3, 3)
laurent = st.dictionaries(st.tuples(exps, exps), st.integers(-3, 3).map(Fraction), max_size=4)


@pytest.fixture(scope="module")
def cert1():
    return certify_cy_group(1, 4)


@pytest.fixture(scope="module")
def cert2():
    return certify_cy_group(2, 3)


@pytest.fixture(scope="module")
def slice1():
    return WeightSlice(1, 3)


@given(laurent, laurent, laurent)
def test_laurent_multiplication_associative_and_unital(a, b, c):
    L = LaurentAlgebra(2)
    a, b, c = ({k: v for k, v in x.items() if v} for x in (a, b, c))
    assert L.mul(L.mul(a, b), c) == L.mul(a, L.mul(b, c))
    assert L.mul(L.unit(), a) == a


@pytest.mark.parametrize("d", [0, 1, 2])
def test_group_koszul_resolution_exact(d):
    rep = koszul_resolution(d).verify(3)
    assert rep["d_squared"] and rep["homotopy"]
    assert rep["ranks"] == [1, d, 1][: d + 1] if d < 2 else rep["ranks"] == [1, 2, 1]


@pytest.mark.parametrize("d", [1, 2])
def test_transferred_resolution_exact(d):
    assert transfer_resolution(GroupResolution(d)).verify(2)["passed"]


@pytest.mark.parametrize("d", [1, 2])
def test_comparison_maps(d):
    cmp = LaurentComparison(transfer_resolution(GroupResolution(d)))
    assert cmp.verify(1)["passed"]


@given(st.data())
def test_operations_preserve_labels(slice1, data):
    # _vec raises AssertionError when an output is not homogeneous of the summed label
    n = len(slice1.coh_keys)
    i, j = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    k = data.draw(st.integers(0, len(slice1.hom_keys) - 1))
    for op, args in ((slice1.cup, (i, j)), (slice1.bracket, (i, j)), (slice1.cap, (k, i)), (slice1.kappa, (k,))):
        try:
            op(*args)
        except WindowOverflow:
            pass


def test_window_overflow_is_reported(slice1):
    top = slice1.coh_index[((), (3,))]
    with pytest.raises(WindowOverflow):
        slice1.cup(top, top)


@pytest.mark.parametrize("d,dims", [(0, [1]), (1, [0, 1]), (2, [0, 0, 1])])
def test_ext_transfer_concentrated_in_top_degree(d, dims):
    rep = ext_transfer(koszul_resolution(d), N=2)
    assert rep["dims"] == dims
    assert rep["vanishing_off_d"] and rep["orientable"]
    assert rep["top_dim_per_weight"] == 1


def test_fundamental_class_d1(slice1):
    fc = group_fundamental_class(slice1.build())
    assert fc["found"] and fc["is_cycle"]
    assert fc["scalar"] == -1
    assert not fc["shifted_candidate_is_fundamental"]


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_witt_oracle_formula(a, b):
    want = {(a + b - 1,): Fraction(b - a)} if b != a else {}
    assert witt_bracket_oracle(a, b) == want


def test_d1_certificates_all_pass(cert1):
    rep, _, _ = cert1
    assert rep["verdict"] == "CY"
    bad = [c for c in rep["certificates"] if c["status"] != "pass"]
    assert not bad
    names = {c["check"] for c in rep["certificates"]}
    assert {"witt_bracket_oracle", "delta_equals_DBD^-1", "ginzburg_formula"} <= names


def test_d1_delta_on_derivations(cert1):
    rep, _, _ = cert1
    table = rep["delta_on_derivations"]
    for n in range(-3, 6):
        got = table[n] if n in table else table[str(n)]
        if n == 0:
            assert not got
        else:
            name = "1" if n == 1 else ("x1" if n == 2 else f"x1^{n - 1}")
            assert got == {name: str(n)}


@pytest.mark.parametrize("which", ["cert1", "cert2"])
def test_observed_identities_hold(which, request):
    rep, _, _ = request.getfixturevalue(which)
    assert rep["observed_identities_hold"]
    assert all(c["status"] == "pass" and c["checked"] > 0 for c in rep["identities_observed"])


def test_printed_bv_fails_d1_with_pinned_witness(cert1):
    rep, _, _ = cert1
    bv = next(c for c in rep["identities_printed"] if c["check"] == "bv_relation")
    assert bv["status"] == "fail"
    # a = 1 in H^0 weight -4, b = x d/dx class: bracket 4, printed right side -4
    assert bv["witness"] == {"basis": [0, 13], "lhs": {"0": "4"}, "rhs": {"0": "-4"}}
    assert not rep["printed_identities_hold"] and not rep["passed"]


def test_d2_verdict_and_printed_failure(cert2):
    rep, _, _ = cert2
    assert rep["verdict"] == "CY"
    assert all(c["status"] == "pass" for c in rep["certificates"])
    assert {c["check"] for c in rep["identities_printed"] if c["status"] == "fail"} == {
        "bv_relation", "tamarkin_tsygan", "four_term_identity"}


def test_d0_is_trivially_cy():
    rep, _, _ = certify_cy_group(0, 2)
    assert rep["verdict"] == "CY"


def test_sign_twist_is_vdb_not_cy():
    rep = nonorientable_twist_demo((-1,), N=3)
    assert rep["untwisted_intertwiner_dim"] == 0
    assert rep["twisted_intertwiner_dim"] > 0
    assert rep["vdb"] == "VdB" and rep["calabi_yau"] == "not CY"


def test_trivial_twist_is_cy():
    rep = nonorientable_twist_demo((1,), N=3)
    assert rep["trivial_twist"] and rep["calabi_yau"] == "CY"


def test_twist_demo_in_rank_two():
    rep = nonorientable_twist_demo((1, -1), N=2)
    assert rep["untwisted_intertwiner_dim"] == 0 and rep["vdb"] == "VdB"


def test_slice_keys_sorted_by_degree():
    sl = WeightSlice(2, 2)
    degs = [len(S) for S, _ in sl.coh_keys]
    assert degs == sorted(degs)
    rng = random.Random(0)
    S, u = rng.choice(sl.coh_keys)
    assert sl.coh_keys[sl.coh_index[(S, u)]] == (S, u)
