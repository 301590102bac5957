"""Seeded random checks of the chain-level identities.

Each identity is evaluated entry-exactly on random integer cochains and
chains.  Degrees are drawn so that every tensor involved has degree at most
``P``.
"""

import random

import numpy as np

from .chains import (
    Chain,
    Cochain,
    cap,
    chain_differential,
    circle_product,
    cochain_differential,
    connes_boundary,
    cup,
    normalize_chain,
    regular,
    sign,
)

__all__ = ["IDENTITIES", "random_cochain", "random_chain", "check_identity", "chain_identity_suite"]

IDENTITIES = (
    "b_squared_cochains",
    "b_squared_chains",
    "B_squared_normalized",
    "bB_plus_Bb",
    "cup_leibniz",
    "cap_compatibility",
    "gerstenhaber_coboundary",
)


def _tensor(rng, shape, density=0.5, bound=3):
    # int64 entries are exact; the chain operations guard magnitudes themselves
    g = np.random.default_rng(rng.getrandbits(64))
    a = g.integers(-bound, bound + 1, size=shape, dtype=np.int64)
    return a * (g.random(shape) < density)


def random_cochain(rng, A, p, M=None):
    M = M or regular(A)
    return Cochain(A, M, p, _tensor(rng, (A.dim,) * p + (M.dim,)))


def random_chain(rng, A, r, M=None):
    M = M or regular(A)
    return Chain(A, M, r, _tensor(rng, (M.dim,) + (A.dim,) * r))


def _pair(rng, top):
    """Degrees ``p, q >= 0`` with ``p + q <= top``."""
    s = rng.randint(0, top)
    p = rng.randint(0, s)
    return p, s - p


def check_identity(name, A, rng, P=6):
    """Evaluate one random instance; returns ``(ok, degrees)``."""
    if name == "b_squared_cochains":
        p = rng.randint(0, P - 2)
        f = random_cochain(rng, A, p)
        return cochain_differential(cochain_differential(f)).is_zero(), (p,)
    if name == "b_squared_chains":
        r = rng.randint(2, P)
        z = random_chain(rng, A, r)
        return chain_differential(chain_differential(z)).is_zero(), (r,)
    if name == "B_squared_normalized":
        r = rng.randint(0, P - 2)
        z = normalize_chain(random_chain(rng, A, r))
        once = normalize_chain(connes_boundary(z))
        return normalize_chain(connes_boundary(once)).is_zero(), (r,)
    if name == "bB_plus_Bb":
        r = rng.randint(1, P - 1)
        z = random_chain(rng, A, r)
        lhs = chain_differential(connes_boundary(z)) + connes_boundary(chain_differential(z))
        return lhs.is_zero(), (r,)
    if name == "cup_leibniz":
        # b(f u g) = bf u g + (-1)^p f u bg
        p, q = _pair(rng, P - 1)
        f, g = random_cochain(rng, A, p), random_cochain(rng, A, q)
        lhs = cochain_differential(cup(f, g))
        rhs = cup(cochain_differential(f), g) + sign(p) * cup(f, cochain_differential(g))
        return (lhs - rhs).is_zero(), (p, q)
    if name == "cap_compatibility":
        # b(z n f) = (-1)^p (bz n f - z n bf), for r >= p + 1
        r = rng.randint(1, P)
        p = rng.randint(0, r - 1)
        z, f = random_chain(rng, A, r), random_cochain(rng, A, p)
        lhs = chain_differential(cap(z, f))
        rhs = -cap(z, cochain_differential(f))
        if r - 1 >= p:
            rhs = rhs + cap(chain_differential(z), f)
        return (lhs - sign(p) * rhs).is_zero(), (r, p)
    if name == "gerstenhaber_coboundary":
        # b(f o g) = f o bg + (-1)^{q-1} bf o g - (-1)^{q-1} (g u f - (-1)^{pq} f u g)
        p, q = _pair(rng, P)
        p, q = max(p, 1), max(q, 1)
        if p + q > P:
            p, q = 1, P - 1
        f, g = random_cochain(rng, A, p), random_cochain(rng, A, q)
        lhs = cochain_differential(circle_product(f, g))
        s = sign(q - 1)
        rhs = circle_product(f, cochain_differential(g)) + s * circle_product(cochain_differential(f), g)
        rhs = rhs - s * (cup(g, f) - sign(p * q) * cup(f, g))
        return (lhs - rhs).is_zero(), (p, q)
    raise KeyError(name)


def chain_identity_suite(A, samples=200, P=6, seed=0, names=IDENTITIES):
    """Run ``samples`` random instances of each identity; returns a report dict.

    The first failing instance of an identity is kept as its witness.
    """
    rng = random.Random(f"{seed}:{A.name}")
    out = {}
    for name in names:
        fails = None
        for k in range(samples):
            ok, degs = check_identity(name, A, rng, P)
            if not ok and fails is None:
                fails = {"sample": k, "degrees": list(degs)}
        out[name] = {"samples": samples, "passed": fails is None, "witness": fails}
    return {"algebra": A.name, "P": P, "seed": seed, "identities": out,
            "passed": all(v["passed"] for v in out.values())}
