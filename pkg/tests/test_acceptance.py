"""One pass/fail line per acceptance criterion, all in exact arithmetic.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import os
import subprocess
import sys
import tempfile
import time

import pytest

from hhbv.algebra import BUILTIN_ALGEBRAS, builtin_algebra, enveloping_bimodule, regular_bimodule
from hhbv.duality.pipeline import check_calabi_yau, check_cap_duality, check_vdb, fundamental_class, top_homology_iso
from hhbv.duality.resolution import builtin_resolution, periodic_dual_numbers_resolution
from hhbv.groups.slice import certify_cy_group, nonorientable_twist_demo
from hhbv.hochschild.checks import chain_identity_suite
from hhbv.hochschild.oracle import oracle_compare
from hhbv.hochschild.table import compute_table, export_calculus
from hhbv.tt_calculus import mutation_score, verify_axioms

sys.path.insert(0, os.path.dirname(__file__))
from support import SEMISIMPLE, non_free_module  # noqa: E402

RESULTS = {}


def _record(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[k] = line
    print(line)
    return ok


def criterion_1():
    t = time.perf_counter()
    bad = []
    for name in sorted(BUILTIN_ALGEBRAS):
        rep = chain_identity_suite(builtin_algebra(name), samples=200, P=6, seed=0)
        bad += [f"{name}:{k}" for k, v in rep["identities"].items() if not v["passed"]]
    dt = time.perf_counter() - t
    ok = not bad and dt < 60
    return _record(1, ok, f"7 identities x 200 samples x {len(BUILTIN_ALGEBRAS)} algebras, "
                          f"failures {bad or 'none'}, {dt:.1f} s")


def criterion_2():
    failing = []
    killed = total = 0
    for name in ["dual_numbers", "product_QxQ", "mat2", "group_algebra_C3"]:
        calc = export_calculus(compute_table(builtin_algebra(name), P=6))
        rep = verify_axioms(calc)
        failing += [f"{name}:{e['check']}" for e in rep.failures()]
        if rep.passed:
            s = mutation_score(calc)
            killed += s["killed"]
            total += s["sites"]
    rate = killed / total if total else 0
    ok = not failing and rate >= 0.95
    return _record(2, ok, f"axiom failures {failing or 'none'}; mutants killed {killed}/{total} = {rate:.3f} "
                          "on the tables whose baseline passes")


def criterion_3():
    A = builtin_algebra("dual_numbers")
    rep = oracle_compare(A, 6, periodic_dual_numbers_resolution(6))
    want = [2, 1, 1, 1, 1, 1]
    sparse = rep["sparse"]["cohomology"]
    ok = rep["agree"] and sparse == want and rep["dense"]["cohomology"] == want
    ut = builtin_algebra("upper_triangular_2")
    res = builtin_resolution(ut)
    top = top_homology_iso(res, fundamental_class(res).D.bimodule)
    ok = ok and top["iso"]
    return _record(3, ok, f"sparse {sparse}, dense {rep['dense']['cohomology']}, "
                          f"periodic resolution {rep['resolution']['cohomology']}; "
                          f"H_d(A, D) iso on upper_triangular_2: {top['iso']}")


def criterion_4():
    bad = []
    for name in SEMISIMPLE:
        A = builtin_algebra(name)
        res = builtin_resolution(A)
        v = check_vdb(res)
        if v["verdict"] != "VdB" or v["d"] != 0:
            bad.append(f"{name}:vdb")
        if not check_calabi_yau(res)["cy"]:
            bad.append(f"{name}:cy")
        fc = fundamental_class(res)
        if not fc.cap_is_identity:
            bad.append(f"{name}:fundamental_class")
        for label, M in (("A", regular_bimodule(A)), ("Ae", enveloping_bimodule(A)), ("non_free", non_free_module(name))):
            if not check_cap_duality(res, M, fc, degrees=range(res.length + 1))["passed"]:
                bad.append(f"{name}:cap_{label}")
    ut = builtin_algebra("upper_triangular_2")
    res = builtin_resolution(ut)
    if check_vdb(res)["verdict"] == "VdB":
        bad.append("upper_triangular_2:unexpected_vdb")
    if not check_cap_duality(res, regular_bimodule(ut))["passed"]:
        bad.append("upper_triangular_2:degree_d_iso")
    return _record(4, not bad, f"{len(SEMISIMPLE)} semisimple algebras x (VdB, CY, c, 3 modules) and "
                               f"upper_triangular_2 degree-d iso; failures {bad or 'none'}")


def criterion_5():
    t = time.perf_counter()
    parts = []
    ok = True
    for d, N in ((1, 4), (2, 3)):
        rep, _, _ = certify_cy_group(d, N)
        certs = all(c["status"] == "pass" for c in rep["certificates"])
        printed = [c["check"] for c in rep["identities_printed"] if c["status"] != "pass"]
        ok = ok and rep["verdict"] == "CY" and certs and not printed
        parts.append(f"d={d}: verdict {rep['verdict']}, certificates {'pass' if certs else 'fail'}, "
                     f"printed identities failing {printed or 'none'}, "
                     f"observed forms {'hold' if rep['observed_identities_hold'] else 'fail'}")
    dt = time.perf_counter() - t
    ok = ok and dt < 300
    return _record(5, ok, "; ".join(parts) + f"; {dt:.0f} s")


def criterion_6():
    rep = nonorientable_twist_demo((-1,), N=3)
    ok = rep["untwisted_intertwiner_dim"] == 0 and rep["vdb"] == "VdB" and rep["calabi_yau"] == "not CY"
    return _record(6, ok, f"untwisted intertwiners {rep['untwisted_intertwiner_dim']}, "
                          f"twisted {rep['twisted_intertwiner_dim']}, {rep['vdb']}, {rep['calabi_yau']}")


COMMANDS = [
    ["hh", "dual_numbers", "--builtin", "-P", "6"],
    ["verify", "mat2", "--builtin", "--fuzz-flip", "2", "--seed", "5", "-P", "4"],
    ["fundamental-class", "upper_triangular_2", "--builtin"],
    ["vdb", "--group", "1", "--twist", "-1", "-N", "3"],
    ["cy", "--builtin", "product_QxQ"],
    ["bv", "--group", "1", "-N", "3"],
    ["oracle-compare", "dual_numbers", "--builtin", "-P", "6"],
]


def criterion_7():
    differ = []
    with tempfile.TemporaryDirectory() as tmp:
        for argv in COMMANDS:
            outs = []
            for k in range(2):
                p = os.path.join(tmp, f"{argv[0]}{k}.json")
                subprocess.run([sys.executable, "-m", "hhbv", *argv, "--seed", "3", "--out", p], check=False)
                with open(p, "rb") as fh:
                    outs.append(fh.read())
            if outs[0] != outs[1] or not outs[0]:
                differ.append(argv[0])
    return _record(7, not differ, f"{len(COMMANDS)} commands run twice; differing {differ or 'none'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("k", range(1, 8))
def test_criterion(k):
    assert CRITERIA[k - 1](), RESULTS[k]


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
