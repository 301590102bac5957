import random
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hhbv.algebra import BUILTIN_ALGEBRAS, builtin_algebra
from hhbv.hochschild.chains import (
    cap,
    chain_differential,
    cochain_differential,
    connes_boundary,
    cup,
    gerstenhaber_bracket,
    identity_cochain,
    multiplication_cochain,
    sign,
)
from hhbv.hochschild.checks import IDENTITIES, chain_identity_suite, check_identity, random_chain, random_cochain

NAMES = sorted(BUILTIN_ALGEBRAS)


@pytest.mark.parametrize("name", NAMES)
def test_seeded_suite_200_samples_at_P6(name):
    rep = chain_identity_suite(builtin_algebra(name), samples=200, P=6, seed=0)
    bad = {k: v["witness"] for k, v in rep["identities"].items() if not v["passed"]}
    assert not bad, bad


def test_suite_runtime_budget():
    t = time.perf_counter()
    for name in NAMES:
        chain_identity_suite(builtin_algebra(name), samples=200, P=6, seed=1)
    assert time.perf_counter() - t < 60


@given(st.sampled_from(NAMES), st.sampled_from(IDENTITIES), st.integers(0, 2**32))
def test_identities_hold_for_any_seed(name, identity, seed):
    ok, _ = check_identity(identity, builtin_algebra(name), random.Random(seed), P=4)
    assert ok


@pytest.mark.parametrize("name", ["mat2", "upper_triangular_2", "dual_numbers"])
def test_wrong_leibniz_sign_is_detected(name):
    # the suite is not vacuous: flipping the sign breaks it on some sample
    A = builtin_algebra(name)
    rng = random.Random(5)
    hits = 0
    for _ in range(20):
        f, g = random_cochain(rng, A, 1), random_cochain(rng, A, 1)
        lhs = cochain_differential(cup(f, g))
        wrong = cup(cochain_differential(f), g) - sign(1) * cup(f, cochain_differential(g))
        hits += not (lhs - wrong).is_zero()
    assert hits > 0


@pytest.mark.parametrize("name", ["mat2", "upper_triangular_2"])
def test_dense_and_sparse_paths_agree(name):
    A = builtin_algebra(name)
    rng = random.Random(11)
    f, g = random_cochain(rng, A, 2), random_cochain(rng, A, 1)
    z = random_chain(rng, A, 3)
    for op in (lambda d: cup(f, g, dense=d), lambda d: cap(z, f, dense=d),
               lambda d: gerstenhaber_bracket(f, g, dense=d), lambda d: cochain_differential(f, dense=d),
               lambda d: chain_differential(z, dense=d), lambda d: connes_boundary(z, dense=d)):
        assert (op(True).as_sparse() - op(False).as_sparse()).is_zero()


@pytest.mark.parametrize("name", NAMES)
def test_associativity_as_vanishing_self_bracket(name):
    A = builtin_algebra(name)
    m = multiplication_cochain(A)
    assert gerstenhaber_bracket(m, m).is_zero()
    # b(id)(a, b) = ab, so the identity 1-cochain bounds m
    assert (cochain_differential(identity_cochain(A)) - m).is_zero()


@pytest.mark.parametrize("name", NAMES)
def test_twisted_cup_leibniz_form(name):
    # with T(f, g) = (-1)^{pq} f u g: b T(f, g) = (-1)^q T(bf, g) + T(f, bg)
    A = builtin_algebra(name)
    rng = random.Random(3)
    f, g = random_cochain(rng, A, 1), random_cochain(rng, A, 2)
    q = 2
    lhs = cochain_differential(cup(f, g, twisted=True))
    rhs = sign(q) * cup(cochain_differential(f), g, twisted=True) + cup(f, cochain_differential(g), twisted=True)
    assert (lhs - rhs).is_zero()
