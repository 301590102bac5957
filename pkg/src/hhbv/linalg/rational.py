"""Rational scalars: coercion and the canonical ``"p/q"`` text form."""

from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = ["Fraction", "to_fraction", "format_rational", "parse_rational", "is_integral"]


def to_fraction(x):
    """Coerce ints, Fractions, numpy integers and ``"p/q"`` strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, _RationalABC):
        return Fraction(int(x.numerator), int(x.denominator))
    if hasattr(x, "dtype") and x.dtype.kind in "iu":
        return Fraction(int(x))
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; pass an exact rational")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational literal: {s!r}")
    return Fraction(s)


def format_rational(x) -> str:
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_integral(x) -> bool:
    return to_fraction(x).denominator == 1
