import numpy as np
import pytest

from hhbv.algebra import builtin_algebra, enveloping_bimodule, regular_bimodule
from hhbv.duality.comparison import lift_chain_map
from hhbv.duality.pipeline import (
    NotCY,
    check_calabi_yau,
    check_cap_duality,
    check_vdb,
    fundamental_class,
    top_homology_iso,
)
from hhbv.duality.resolution import (
    NotExact,
    ResolutionComplex,
    builtin_resolution,
    periodic_dual_numbers_resolution,
    verify_resolution,
)

from support import SEMISIMPLE, non_free_module


@pytest.mark.parametrize("name", SEMISIMPLE + ["upper_triangular_2"])
def test_builtin_resolutions_verify(name):
    rep = verify_resolution(builtin_resolution(builtin_algebra(name)))
    assert rep["passed"], [c for c in rep["checks"] if c["status"] == "fail"]


def test_truncated_periodic_resolution_skips_top():
    rep = verify_resolution(periodic_dual_numbers_resolution(4))
    assert rep["passed"] and rep["truncated"]
    assert rep["checks"][-1]["status"] == "skipped"


def test_broken_resolution_raises_in_strict_mode():
    A = builtin_algebra("upper_triangular_2")
    res = builtin_resolution(A)
    bad = ResolutionComplex(A, [[np.array(e) for e in deg] for deg in res.summands],
                            [[[u * 2 for u in row] for row in D] for D in res.differentials],
                            [a * 0 for a in res.augmentation], name="broken")
    with pytest.raises(NotExact):
        verify_resolution(bad, strict=True)


@pytest.mark.parametrize("name", SEMISIMPLE)
def test_semisimple_is_vdb_in_degree_zero(name):
    rep = check_vdb(builtin_resolution(builtin_algebra(name)))
    assert rep["verdict"] == "VdB" and rep["d"] == 0
    assert rep["vanishing_off_d"]


@pytest.mark.parametrize("name", SEMISIMPLE)
def test_semisimple_is_calabi_yau(name):
    rep = check_calabi_yau(builtin_resolution(builtin_algebra(name)))
    assert rep["cy"] and rep["bv_passed"]
    assert rep["axioms"]["passed"]


@pytest.mark.parametrize("name", SEMISIMPLE + ["upper_triangular_2"])
def test_fundamental_class_restricts_to_identity(name):
    fc = fundamental_class(builtin_resolution(builtin_algebra(name)))
    assert fc.cap_is_identity
    k = fc.D.dim
    assert fc.cap_matrix == [[int(i == j) for j in range(k)] for i in range(k)]


@pytest.mark.parametrize("name", SEMISIMPLE)
@pytest.mark.parametrize("module", ["A", "Ae", "non_free"])
def test_cap_duality_iso_all_degrees(name, module):
    A = builtin_algebra(name)
    res = builtin_resolution(A)
    M = {"A": regular_bimodule, "Ae": enveloping_bimodule}.get(module)
    M = M(A) if M else non_free_module(name)
    rep = check_cap_duality(res, M, degrees=range(res.length + 1))
    assert rep["passed"], rep


def test_upper_triangular_is_not_vdb():
    res = builtin_resolution(builtin_algebra("upper_triangular_2"))
    rep = check_vdb(res)
    assert rep["verdict"] == "not VdB"
    assert not rep["vanishing_off_d"]
    with pytest.raises(NotCY):
        check_calabi_yau(res)


@pytest.mark.parametrize("module", ["A", "Ae", "D"])
def test_upper_triangular_top_degree_iso(module):
    A = builtin_algebra("upper_triangular_2")
    res = builtin_resolution(A)
    fc = fundamental_class(res)
    M = {"A": regular_bimodule(A), "Ae": enveloping_bimodule(A), "D": fc.D.bimodule}[module]
    assert top_homology_iso(res, M)["iso"]


def test_upper_triangular_degree_d_cap_iso():
    A = builtin_algebra("upper_triangular_2")
    res = builtin_resolution(A)
    rep = check_cap_duality(res, regular_bimodule(A))
    assert rep["degrees"][0]["p"] == res.length
    assert rep["passed"]


def test_upper_triangular_fundamental_class_sign_against_top_iso():
    # preimage of id_D under the top-degree iso is (-1)^d c
    fc = fundamental_class(builtin_resolution(builtin_algebra("upper_triangular_2")))
    assert fc.d == 1 and fc.iso_ratio == -1


@pytest.mark.parametrize("name", ["upper_triangular_2", "mat2"])
def test_comparison_maps_are_chain_maps(name):
    maps = lift_chain_map(builtin_resolution(builtin_algebra(name)))
    assert maps.passed, maps.report()


def test_fundamental_class_json():
    fc = fundamental_class(builtin_resolution(builtin_algebra("upper_triangular_2")))
    obj = fc.to_json_obj()
    assert obj["cap_is_identity"] and obj["d"] == 1
