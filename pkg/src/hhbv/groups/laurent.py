"""Laurent polynomials ``Q[x_1^{+-1}, .., x_d^{+-1}] = Q[Z^d]`` as finitely supported dicts.

A monomial is its exponent tuple; a polynomial is ``{exponent: Fraction}``
with no zero values.
"""

from fractions import Fraction

__all__ = ["LaurentAlgebra", "ladd", "lmul", "lscale", "mono", "wadd", "wsub", "in_window", "window"]


def wadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def wsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono(w, c=1):
    return {tuple(w): Fraction(c)}


def ladd(*ps):
    out = {}
    for p in ps:
        for w, c in p.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def lscale(c, p):
    return {w: c * v for w, v in p.items()} if c else {}


def lmul(p, q):
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            w = wadd(a, b)
            v = out.get(w, 0) + x * y
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def in_window(w, N):
    return all(-N <= x <= N for x in w)


def window(d, N):
    """All exponents in ``[-N, N]^d`` in lexicographic order."""
    out = [()]
    for _ in range(d):
        out = [t + (k,) for t in out for k in range(-N, N + 1)]
    return out


class LaurentAlgebra:
    """The group algebra of ``Z^d`` over Q."""

    def __init__(self, d):
        if d < 0:
            raise ValueError("rank must be non-negative")
        self.d = d

    @property
    def zero_weight(self):
        return (0,) * self.d

    def unit(self):
        return mono(self.zero_weight)

    def generator(self, k, power=1):
        w = [0] * self.d
        w[k] = power
        return mono(w)

    def mul(self, p, q):
        return lmul(p, q)

    def add(self, *ps):
        return ladd(*ps)

    def augmentation(self, p):
        return sum(p.values(), Fraction(0))

    def __repr__(self):
        return f"LaurentAlgebra(d={self.d})"
