"""Hochschild cochains and chains with the bar-complex operations.

A cochain of degree p with values in M is a tensor of shape ``(n,)*p + (m,)``;
a chain of degree r is a tensor of shape ``(m,) + (n,)*r``.  Every operation
has a dense implementation (numpy einsum, int64 when a magnitude bound
allows it, Fractions otherwise) and an independent sparse implementation on
``{index tuple: Fraction}`` dicts.  ``DENSE_LIMIT`` selects between them.

Sign conventions.  The differentials are the usual ones.  ``cup`` and ``cap``
default to the untwisted products ``f(a_1..a_p) (x) g(..)`` and
``(n (x) f(a_1..a_p), a_{p+1}, ..)``; ``twisted=True`` multiplies by
``(-1)^{pq}`` resp. ``(-1)^{rp}``.  See README for why the default is
untwisted and where the ``(-1)^{rp}`` sign is applied instead.
"""

import string
from fractions import Fraction
from itertools import product

import numpy as np

from ..algebra import bimodule_tensor_over_A, regular_bimodule

__all__ = [
    "Cochain",
    "Chain",
    "DegreeError",
    "CoefficientError",
    "DENSE_LIMIT",
    "cochain_differential",
    "chain_differential",
    "connes_boundary",
    "cup",
    "cap",
    "circle_i",
    "circle_product",
    "gerstenhaber_bracket",
    "multiplication_cochain",
    "identity_cochain",
    "unit_cochain",
    "normalize_chain",
    "is_normalized_cochain",
    "sign",
]

DENSE_LIMIT = 1 << 18
_SAFE = 1 << 56
_LET = string.ascii_letters


class DegreeError(ValueError):
    pass


class CoefficientError(ValueError):
    """The operation needs coefficients in the regular bimodule A."""


def sign(e):
    return -1 if e % 2 else 1


def is_regular(M):
    return getattr(M, "name", None) == "A" and M.dim == M.algebra.dim and np.array_equal(M.left, M.algebra.mul)


def _regular(A):
    cache = A.__dict__.setdefault("_regular_bimodule", None)
    if cache is None:
        cache = regular_bimodule(A)
        A.__dict__["_regular_bimodule"] = cache
    return cache


def _tensor(M, N):
    key = (id(M), id(N))
    cache = M.__dict__.setdefault("_tensor_cache", {})
    if key not in cache:
        cache[key] = (bimodule_tensor_over_A(M, N), N)
    return cache[key][0]


# ---------------------------------------------------------------- containers


class _Tensorish:
    __slots__ = ()

    @property
    def is_dense(self):
        return isinstance(self.coeffs, np.ndarray)

    def dense(self):
        if self.is_dense:
            return self.coeffs
        a = np.zeros(self.shape, dtype=object)
        a[...] = 0
        for idx, v in self.coeffs.items():
            a[idx] = v
        return _shrink(a)

    def sparse(self):
        if not self.is_dense:
            return self.coeffs
        a = self.coeffs
        nz = np.argwhere(a != 0)
        return {tuple(int(x) for x in idx): Fraction(int(a[tuple(idx)])) if a.dtype != object else Fraction(a[tuple(idx)])
                for idx in nz}

    def as_dense(self):
        return type(self)(self.algebra, self.module, self.degree, self.dense())

    def as_sparse(self):
        return type(self)(self.algebra, self.module, self.degree, self.sparse())

    def is_zero(self):
        if self.is_dense:
            return not np.any(self.coeffs != 0)
        return not any(v != 0 for v in self.coeffs.values())

    def __eq__(self, other):
        if not isinstance(other, type(self)) or self.degree != other.degree or self.shape != other.shape:
            return NotImplemented if not isinstance(other, type(self)) else False
        return (self - other).is_zero()

    def __hash__(self):
        return id(self)

    def _combine(self, other, s):
        if self.is_dense and other.is_dense:
            a, b = _common(self.coeffs, other.coeffs)
            return type(self)(self.algebra, self.module, self.degree, _shrink(a + s * b))
        a, b = self.sparse(), other.sparse()
        out = dict(a)
        for k, v in b.items():
            w = out.get(k, 0) + s * v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return type(self)(self.algebra, self.module, self.degree, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if self.is_dense:
            a = self.coeffs
            if isinstance(c, Fraction) and c.denominator != 1:
                a = a.astype(object)
            elif isinstance(c, Fraction):
                c = int(c)
            return type(self)(self.algebra, self.module, self.degree, _shrink(a * c))
        return type(self)(self.algebra, self.module, self.degree,
                          {k: v * c for k, v in self.coeffs.items() if v * c})

    def __rmul__(self, c):
        return self.scale(c)


class Cochain(_Tensorish):
    """Element of ``Hom(A^{(x)p}, M)``."""

    __slots__ = ("algebra", "module", "degree", "coeffs")

    def __init__(self, algebra, module, degree, coeffs):
        self.algebra, self.module, self.degree = algebra, module, degree
        if isinstance(coeffs, np.ndarray) and coeffs.shape != self.shape:
            raise ValueError(f"cochain tensor shape {coeffs.shape} != {self.shape}")
        self.coeffs = coeffs

    @property
    def shape(self):
        return (self.algebra.dim,) * self.degree + (self.module.dim,)

    def __repr__(self):
        return f"Cochain(p={self.degree}, {'dense' if self.is_dense else 'sparse'})"


class Chain(_Tensorish):
    """Element of ``M (x) A^{(x)r}``."""

    __slots__ = ("algebra", "module", "degree", "coeffs")

    def __init__(self, algebra, module, degree, coeffs):
        self.algebra, self.module, self.degree = algebra, module, degree
        if isinstance(coeffs, np.ndarray) and coeffs.shape != self.shape:
            raise ValueError(f"chain tensor shape {coeffs.shape} != {self.shape}")
        self.coeffs = coeffs

    @property
    def shape(self):
        return (self.module.dim,) + (self.algebra.dim,) * self.degree

    def __repr__(self):
        return f"Chain(r={self.degree}, {'dense' if self.is_dense else 'sparse'})"


# ---------------------------------------------------------------- dense helpers


def _shrink(a):
    """Return an int64 array when every entry is integral and small, else an object array."""
    if a.dtype != object:
        return a
    flat = a.reshape(-1)
    ok = True
    for x in flat:
        if isinstance(x, Fraction):
            if x.denominator != 1 or abs(x.numerator) >= _SAFE:
                ok = False
                break
        elif abs(int(x)) >= _SAFE:
            ok = False
            break
    if ok:
        return np.array([int(x) for x in flat], dtype=np.int64).reshape(a.shape)
    return np.array([Fraction(x) for x in flat], dtype=object).reshape(a.shape)


def _common(*arrays):
    if all(a.dtype != object for a in arrays):
        return arrays
    return tuple(a.astype(object) for a in arrays)


def _maxabs(a):
    if a.size == 0:
        return 0
    if a.dtype != object:
        return int(np.max(np.abs(a)))
    return max(abs(x) for x in a.reshape(-1))


def _es(spec, *ops):
    """einsum in int64 when a magnitude bound allows it, else over Fractions."""
    ins, out = spec.split("->")
    ins = ins.split(",")
    if all(o.dtype != object for o in ops):
        bound = 1
        for o in ops:
            bound *= _maxabs(o)
        sizes = {}
        for letters, o in zip(ins, ops):
            for ch, s in zip(letters, o.shape):
                sizes[ch] = s
        for ch in set("".join(ins)) - set(out):
            bound *= sizes[ch]
        if bound < _SAFE:
            return np.einsum(spec, *ops)
    return np.einsum(spec, *[o.astype(object) for o in ops])


def _acc(terms, shape):
    if not terms:
        return np.zeros(shape, dtype=np.int64)
    terms = _common(*terms)
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return _shrink(total) if total.dtype == object else total


def _int_or_obj(a):
    return a if a.dtype != object else _shrink(a)


def _alg_tensors(A, M):
    mul = A.int_mul if A.int_mul is not None else A.mul
    L = _int_or_obj(M.left) if M.dim else np.zeros(M.left.shape, dtype=np.int64)
    R = _int_or_obj(M.right) if M.dim else np.zeros(M.right.shape, dtype=np.int64)
    return mul, L, R


def _letters(k, start=0):
    return _LET[start:start + k]


# ---------------------------------------------------------------- sparse helpers


def _nz3(T):
    """Nonzero structure of a 3-tensor as ``{(i, j): [(k, c), ...]}``."""
    out = {}
    for idx in np.argwhere(T != 0):
        i, j, k = (int(x) for x in idx)
        out.setdefault((i, j), []).append((k, Fraction(T[i, j, k])))
    return out


def _sparse_struct(A, M):
    key = "_sparse_struct"
    cache = M.__dict__.setdefault(key, None)
    if cache is None:
        cache = (_nz3(A.mul), _nz3(M.left), _nz3(M.right))
        M.__dict__[key] = cache
    return cache


def _add(out, k, v):
    w = out.get(k, 0) + v
    if w:
        out[k] = w
    else:
        out.pop(k, None)


# ---------------------------------------------------------------- differentials


def _use_dense(*xs):
    return all(x.is_dense or int(np.prod(x.shape)) <= DENSE_LIMIT for x in xs)


def cochain_differential(f, dense=None):
    """Hochschild coboundary ``b: C^p(A,M) -> C^{p+1}(A,M)``."""
    A, M, p = f.algebra, f.module, f.degree
    if dense is None:
        dense = _use_dense(f) and A.dim ** (p + 1) * M.dim <= DENSE_LIMIT
    if dense:
        return Cochain(A, M, p + 1, _cob_dense(f.dense(), A, M, p))
    return Cochain(A, M, p + 1, _cob_sparse(f.sparse(), A, M, p))


def _cob_dense(f, A, M, p):
    mul, L, R = _alg_tensors(A, M)
    n, m = A.dim, M.dim
    a = _letters(p + 1)  # a_1 .. a_{p+1}
    u, v, k = "xyz"
    terms = [_es(f"{a[0]}{u}{v},{a[1:]}{u}->{a}{v}", L, f)]
    for i in range(1, p + 1):
        # f(a_1, .., a_i a_{i+1}, ..)
        fin = a[: i - 1] + k + a[i + 1:] + v
        t = _es(f"{a[i - 1]}{a[i]}{k},{fin}->{a}{v}", mul, f)
        terms.append(t * sign(i))
    terms.append(_es(f"{a[:p]}{u},{u}{a[p]}{v}->{a}{v}", f, R) * sign(p + 1))
    return _acc(terms, (n,) * (p + 1) + (m,))


def _cob_sparse(f, A, M, p):
    mul, L, R = _sparse_struct(A, M)
    n = A.dim
    out = {}
    for idx, c in f.items():
        args, uu = idx[:-1], idx[-1]
        # a_1 f(a_2..): a_1 ranges over the basis
        for a1 in range(n):
            for vv, x in L.get((a1, uu), ()):
                _add(out, (a1,) + args + (vv,), c * x)
        # interior terms: need (a_i, a_{i+1}) whose product hits args[i-1]
        for i in range(1, p + 1):
            s = sign(i)
            target = args[i - 1]
            for (x1, x2), prods in mul.items():
                for kk, w in prods:
                    if kk == target:
                        _add(out, args[: i - 1] + (x1, x2) + args[i:] + (uu,), s * c * w)
        for ap in range(n):
            for vv, x in R.get((uu, ap), ()):
                _add(out, args + (ap, vv), sign(p + 1) * c * x)
    return out


def chain_differential(z, dense=None):
    """Hochschild boundary ``b: C_r(A,M) -> C_{r-1}(A,M)``."""
    A, M, r = z.algebra, z.module, z.degree
    if r == 0:
        raise DegreeError("the boundary of a degree 0 chain is not defined")
    if dense is None:
        dense = _use_dense(z)
    if dense:
        return Chain(A, M, r - 1, _chb_dense(z.dense(), A, M, r))
    return Chain(A, M, r - 1, _chb_sparse(z.sparse(), A, M, r))


def _chb_dense(z, A, M, r):
    mul, L, R = _alg_tensors(A, M)
    a = _letters(r)
    u, v, k = "xyz"
    terms = [_es(f"{u}{a[0]}{v},{u}{a}->{v}{a[1:]}", R, z)]
    for i in range(1, r):
        out = a[: i - 1] + k + a[i + 1:]
        terms.append(_es(f"{a[i - 1]}{a[i]}{k},{u}{a}->{u}{out}", mul, z) * sign(i))
    terms.append(_es(f"{a[r - 1]}{u}{v},{u}{a}->{v}{a[:r - 1]}", L, z) * sign(r))
    return _acc(terms, (M.dim,) + (A.dim,) * (r - 1))


def _chb_sparse(z, A, M, r):
    mul, L, R = _sparse_struct(A, M)
    out = {}
    for idx, c in z.items():
        uu, args = idx[0], idx[1:]
        for vv, x in R.get((uu, args[0]), ()):
            _add(out, (vv,) + args[1:], c * x)
        for i in range(1, r):
            for kk, w in mul.get((args[i - 1], args[i]), ()):
                _add(out, (uu,) + args[: i - 1] + (kk,) + args[i + 1:], sign(i) * c * w)
        for vv, x in L.get((args[-1], uu), ()):
            _add(out, (vv,) + args[:-1], sign(r) * c * x)
    return out


def connes_boundary(z, dense=None):
    """Connes' operator ``B: C_r(A,A) -> C_{r+1}(A,A)`` (raw, not normalized)."""
    A, M, r = z.algebra, z.module, z.degree
    if not is_regular(M):
        raise CoefficientError("B is defined for coefficients in A only")
    if dense is None:
        dense = _use_dense(z) and A.dim ** (r + 2) <= DENSE_LIMIT
    unit = A.unit
    if dense:
        zz = z.dense()
        total = None
        for j in range(r + 1):
            order = list(range(j, r + 1)) + list(range(j))
            t = np.transpose(zz, order) * sign(j * r)
            total = t if total is None else total + t
        u, total = _common(_shrink(np.array(list(unit), dtype=object)), total)
        out = np.multiply.outer(u, total)
        return Chain(A, M, r + 1, _shrink(out) if out.dtype == object else out)
    out = {}
    nzu = [(i, Fraction(x)) for i, x in enumerate(unit) if x]
    for idx, c in z.sparse().items():
        for j in range(r + 1):
            rot = idx[j:] + idx[:j]
            for i, x in nzu:
                _add(out, (i,) + rot, sign(j * r) * c * x)
    return Chain(A, M, r + 1, out)


# ---------------------------------------------------------------- products


def cup(f, g, twisted=False, dense=None):
    """Cup product ``C^p(A,M) x C^q(A,N) -> C^{p+q}(A, M (x)_A N)``.

    When both coefficient modules are the regular bimodule the result is
    returned in ``A`` through ``A (x)_A A = A``.
    """
    A, p, q = f.algebra, f.degree, g.degree
    M, N = f.module, g.module
    s = sign(p * q) if twisted else 1
    regular = is_regular(M) and is_regular(N)
    T = None if regular else _tensor(M, N)
    target = M if regular else T.bimodule
    if dense is None:
        dense = _use_dense(f, g) and A.dim ** (p + q) * target.dim <= DENSE_LIMIT
    if dense:
        a = _letters(p + q)
        fd, gd = f.dense(), g.dense()
        if regular:
            mul = A.int_mul if A.int_mul is not None else A.mul
            out = _es(f"{a[:p]}x,{a[p:]}y,xyz->{a}z", fd, gd, mul)
        else:
            S = _surj_dense(T)
            out = _es(f"{a[:p]}x,{a[p:]}y,wxy->{a}w", fd, gd, S)
        return Cochain(A, target, p + q, out * s if s != 1 else out)
    out = {}
    mul = _sparse_struct(A, M)[0] if regular else None
    k = N.dim
    for fi, fc in f.sparse().items():
        for gi, gc in g.sparse().items():
            args = fi[:-1] + gi[:-1]
            if regular:
                for kk, w in mul.get((fi[-1], gi[-1]), ()):
                    _add(out, args + (kk,), s * fc * gc * w)
            else:
                for kk, w in T.project({fi[-1] * k + gi[-1]: 1}).items():
                    _add(out, args + (kk,), s * fc * gc * w)
    return Cochain(A, target, p + q, out)


def _surj_dense(T):
    cache = T.__dict__.get("_surj_dense")
    if cache is None:
        S = np.zeros((T.dim, T.M.dim, T.N.dim), dtype=object)
        S[...] = 0
        for c in range(T.ambient):
            u, w = divmod(c, T.N.dim)
            for j, x in T.project({c: 1}).items():
                S[j, u, w] = x
        cache = _shrink(S)
        T.__dict__["_surj_dense"] = cache
    return cache


def cap(z, f, twisted=False, dense=None):
    """Cap product ``C_r(A,N) x C^p(A,M) -> C_{r-p}(A, N (x)_A M)``."""
    A, r, p = z.algebra, z.degree, f.degree
    if p > r:
        raise DegreeError(f"cannot cap a degree {r} chain with a degree {p} cochain")
    N, M = z.module, f.module
    s = sign(r * p) if twisted else 1
    regular = is_regular(M) and is_regular(N)
    T = None if regular else _tensor(N, M)
    target = N if regular else T.bimodule
    if dense is None:
        dense = _use_dense(z, f)
    if dense:
        a = _letters(r)
        zd, fd = z.dense(), f.dense()
        if regular:
            mul = A.int_mul if A.int_mul is not None else A.mul
            out = _es(f"x{a},{a[:p]}y,xyw->w{a[p:]}", zd, fd, mul)
        else:
            S = _surj_dense(T)
            out = _es(f"x{a},{a[:p]}y,wxy->w{a[p:]}", zd, fd, S)
        return Chain(A, target, r - p, out * s if s != 1 else out)
    out = {}
    mul = _sparse_struct(A, M)[0] if regular else None
    fs = {}
    for fi, fc in f.sparse().items():
        fs.setdefault(fi[:-1], []).append((fi[-1], fc))
    k = M.dim
    for zi, zc in z.sparse().items():
        uu, args = zi[0], zi[1:]
        for vv, fc in fs.get(args[:p], ()):
            if regular:
                for kk, w in mul.get((uu, vv), ()):
                    _add(out, (kk,) + args[p:], s * zc * fc * w)
            else:
                for kk, w in T.project({uu * k + vv: 1}).items():
                    _add(out, (kk,) + args[p:], s * zc * fc * w)
    return Chain(A, target, r - p, out)


def circle_i(f, g, i, dense=None):
    """``f o_i g``: insert ``g`` at argument ``i`` (1-based) of ``f``."""
    A, p, q = f.algebra, f.degree, g.degree
    if not (is_regular(f.module) and is_regular(g.module)):
        raise CoefficientError("circle products need coefficients in A")
    if not 1 <= i <= p:
        raise ValueError("insertion index out of range")
    deg = p + q - 1
    if dense is None:
        dense = _use_dense(f, g) and A.dim ** (deg + 1) <= DENSE_LIMIT
    if dense:
        a = _letters(deg)
        fin = a[: i - 1] + "x" + a[i - 1 + q:] + "z"
        return Cochain(A, f.module, deg, _es(f"{a[i - 1:i - 1 + q]}x,{fin}->{a}z", g.dense(), f.dense()))
    out = {}
    gs = {}
    for gi, gc in g.sparse().items():
        gs.setdefault(gi[-1], []).append((gi[:-1], gc))
    for fi, fc in f.sparse().items():
        x = fi[i - 1]
        for gargs, gc in gs.get(x, ()):
            _add(out, fi[: i - 1] + gargs + fi[i:], fc * gc)
    return Cochain(A, f.module, deg, out)


def circle_product(f, g, dense=None):
    """``f o g = sum_i (-1)^{(i-1)(q-1)} f o_i g``."""
    p, q = f.degree, g.degree
    A = f.algebra
    if not (is_regular(f.module) and is_regular(g.module)):
        raise CoefficientError("circle products need coefficients in A")
    total = None
    for i in range(1, p + 1):
        t = circle_i(f, g, i, dense=dense)
        if sign((i - 1) * (q - 1)) < 0:
            t = -t
        total = t if total is None else total + t
    if total is None:
        deg = p + q - 1
        if deg < 0:
            raise DegreeError("circle product of a 0-cochain into a 0-cochain")
        return Cochain(A, f.module, deg, np.zeros((A.dim,) * deg + (A.dim,), dtype=np.int64))
    return total


def gerstenhaber_bracket(f, g, dense=None):
    """``[f,g] = f o g - (-1)^{(p-1)(q-1)} g o f``."""
    p, q = f.degree, g.degree
    a = circle_product(f, g, dense=dense)
    b = circle_product(g, f, dense=dense)
    if a.is_dense != b.is_dense:
        a, b = a.as_sparse(), b.as_sparse()
    return a - b if sign((p - 1) * (q - 1)) > 0 else a + b


# ---------------------------------------------------------------- examples / helpers


def _basis_cochain(A, M, p, fn):
    out = np.zeros((A.dim,) * p + (M.dim,), dtype=object)
    out[...] = 0
    for args in product(range(A.dim), repeat=p):
        out[args] = fn(args)
    return _shrink(out)


def unit_cochain(A, M=None):
    """The 0-cochain with value ``1_A``."""
    M = M or _regular(A)
    return Cochain(A, M, 0, _shrink(np.array(list(A.unit), dtype=object)))


def identity_cochain(A):
    M = _regular(A)
    return Cochain(A, M, 1, _shrink(np.eye(A.dim, dtype=object) * Fraction(1)))


def multiplication_cochain(A):
    M = _regular(A)
    return Cochain(A, M, 2, _shrink(A.mul.copy()))


def regular(A):
    """Cached regular bimodule of ``A`` (cochain ops recognize it by identity of data)."""
    return _regular(A)


def normalize_chain(z):
    """Image in the normalized complex: drop tuples with a unit argument (unit = ``e_0``)."""
    if not z.algebra.unit_is_first:
        raise ValueError("normalization needs the unit as basis element 0")
    if z.is_dense:
        a = z.coeffs.copy()
        for pos in range(1, z.degree + 1):
            sl = [slice(None)] * (z.degree + 1)
            sl[pos] = 0
            a[tuple(sl)] = 0
        return Chain(z.algebra, z.module, z.degree, a)
    return Chain(z.algebra, z.module, z.degree,
                 {k: v for k, v in z.coeffs.items() if 0 not in k[1:]})


def is_normalized_cochain(f):
    if f.is_dense:
        a = f.coeffs
        for pos in range(f.degree):
            sl = [slice(None)] * (f.degree + 1)
            sl[pos] = 0
            if np.any(a[tuple(sl)] != 0):
                return False
        return True
    return all(0 not in k[:-1] for k in f.coeffs)

