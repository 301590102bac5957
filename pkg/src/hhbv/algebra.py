"""Finite-dimensional unital algebras over Q, bimodules, and tensor products over A.

Tensors are numpy object arrays of Fractions:

* ``mul[i, j, k]``: ``e_i e_j = sum_k mul[i, j, k] e_k``
* ``left[i, u, v]``: ``e_i . f_u = sum_v left[i, u, v] f_v``
* ``right[u, i, v]``: ``f_u . e_i = sum_v right[u, i, v] f_v``
"""

import json
from fractions import Fraction

import numpy as np

from .linalg import SparseMatrix, format_rational, parse_rational, rref, to_fraction

__all__ = [
    "AlgebraPresentation",
    "Bimodule",
    "TensorOverA",
    "InvariantError",
    "UnknownName",
    "BUILTIN_ALGEBRAS",
    "builtin_algebra",
    "enveloping",
    "regular_bimodule",
    "enveloping_bimodule",
    "twisted_bimodule",
    "bimodule_to_left_module",
    "left_module_to_bimodule",
    "bimodule_tensor_over_A",
    "frac_array",
    "load_algebra",
    "load_bimodule",
]


class InvariantError(ValueError):
    """A structural axiom (associativity, unit, module law) fails."""


class UnknownName(KeyError):
    pass


def frac_array(a):
    """Object array of Fractions with the same shape as ``a``."""
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for k, x in enumerate(a.reshape(-1)):
        flat[k] = to_fraction(x)
    return out


def _zeros(shape):
    return np.full(shape, Fraction(0), dtype=object)


def _int_or_none(a):
    """int64 copy of an object array of small integral Fractions, else None."""
    flat = a.reshape(-1)
    if all(x.denominator == 1 and abs(x.numerator) < (1 << 20) for x in flat):
        return np.array([int(x) for x in flat], dtype=np.int64).reshape(a.shape)
    return None


def _es2(spec, *ops):
    """einsum over two-fold products, in int64 when every operand allows it."""
    ints = [_int_or_none(o) for o in ops]
    if all(x is not None for x in ints):
        return np.einsum(spec, *ints)
    return np.einsum(spec, *ops)


def _first_bad(mask):
    idx = np.argwhere(mask)
    return tuple(int(x) for x in idx[0]) if len(idx) else None


class AlgebraPresentation:
    """Associative unital algebra with basis ``e_0..e_{n-1}``."""

    def __init__(self, mul, unit, basis_names=None, name=None, check=True):
        self.mul = frac_array(mul)
        n = self.mul.shape[0]
        if self.mul.shape != (n, n, n):
            raise InvariantError("structure constants must have shape (n, n, n)")
        self.dim = n
        self.unit = frac_array(unit)
        if self.unit.shape != (n,):
            raise InvariantError("unit has the wrong length")
        self.basis_names = list(basis_names) if basis_names else [f"e{i}" for i in range(n)]
        self.name = name
        if check:
            self.check()
        self._int_mul = None

    def check(self):
        m = self.mul
        # (e_i e_j) e_k versus e_i (e_j e_k)
        lhs = _es2("ijs,skt->ijkt", m, m)
        rhs = _es2("jks,ist->ijkt", m, m)
        bad = _first_bad(lhs != rhs)
        if bad is not None:
            raise InvariantError(f"associativity fails at basis triple {bad[:3]}")
        eye = np.eye(self.dim, dtype=int)
        if not np.all(np.einsum("i,ijk->jk", self.unit, m) == eye):
            raise InvariantError("unit does not act as identity on the left")
        if not np.all(np.einsum("j,ijk->ik", self.unit, m) == eye):
            raise InvariantError("unit does not act as identity on the right")

    @property
    def unit_is_first(self):
        return self.unit[0] == 1 and all(x == 0 for x in self.unit[1:])

    @property
    def int_mul(self):
        """int64 copy of ``mul`` when all structure constants are integers, else None."""
        if self._int_mul is None:
            if all(x.denominator == 1 for x in self.mul.reshape(-1)):
                self._int_mul = np.array([int(x) for x in self.mul.reshape(-1)], dtype=np.int64).reshape(self.mul.shape)
            else:
                self._int_mul = False
        return self._int_mul if self._int_mul is not False else None

    def multiply(self, x, y):
        return np.einsum("i,j,ijk->k", frac_array(x), frac_array(y), self.mul)

    def basis_vector(self, i):
        v = _zeros(self.dim)
        v[i] = Fraction(1)
        return v

    def is_commutative(self):
        return bool(np.all(self.mul == self.mul.transpose(1, 0, 2)))

    def opposite(self):
        return AlgebraPresentation(self.mul.transpose(1, 0, 2), self.unit, self.basis_names,
                                   name=f"{self.name}^op" if self.name else None)

    def change_basis(self, P):
        """Presentation in the basis ``e'_j = sum_i P[i, j] e_i`` (``P`` invertible)."""
        P = frac_array(P)
        Pinv = _inverse(P)
        mul = np.einsum("ia,jb,ijk,ck->abc", P, P, self.mul, Pinv)
        unit = Pinv.dot(self.unit)
        return AlgebraPresentation(mul, unit, name=self.name)

    def with_unit_first(self):
        """``(B, P)`` with ``B`` isomorphic to self, unit of ``B`` equal to ``e_0``."""
        if self.unit_is_first:
            return self, frac_array(np.eye(self.dim, dtype=int))
        j = next(i for i, x in enumerate(self.unit) if x != 0)
        P = frac_array(np.eye(self.dim, dtype=int))
        cols = [self.unit] + [P[:, i] for i in range(self.dim) if i != j]
        P = frac_array(np.stack(cols, axis=1))
        B = self.change_basis(P)
        B.basis_names = ["1"] + [self.basis_names[i] for i in range(self.dim) if i != j]
        return B, P

    def to_json_obj(self):
        ents = [[i, j, k, format_rational(v)] for (i, j, k), v in np.ndenumerate(self.mul) if v != 0]
        return {
            "dim": self.dim,
            "basis": list(self.basis_names),
            "unit": [format_rational(x) for x in self.unit],
            "mul": ents,
        }

    @classmethod
    def from_json_obj(cls, obj):
        n = int(obj["dim"])
        mul = _zeros((n, n, n))
        for i, j, k, v in obj["mul"]:
            mul[i, j, k] = parse_rational(str(v))
        unit = [parse_rational(str(x)) for x in obj["unit"]]
        return cls(mul, unit, obj.get("basis"), name=obj.get("name"))

    def __repr__(self):
        return f"AlgebraPresentation({self.name or '?'}, dim={self.dim})"


def _inverse(P):
    from .linalg import solve_many

    n = P.shape[0]
    sols = solve_many(SparseMatrix.from_dense(P), [{i: 1} for i in range(n)])
    if any(s is None for s in sols):
        raise InvariantError("change of basis matrix is singular")
    inv = _zeros((n, n))
    for j, s in enumerate(sols):
        for i, v in s.items():
            inv[i, j] = v
    return inv


class Bimodule:
    """Finite-dimensional A-bimodule with separate left and right actions."""

    def __init__(self, algebra, left, right, name=None, check=True):
        self.algebra = algebra
        self.left = frac_array(left)
        self.right = frac_array(right)
        m = self.left.shape[1] if self.left.ndim == 3 else 0
        self.dim = m
        n = algebra.dim
        if self.left.shape != (n, m, m) or self.right.shape != (m, n, m):
            raise InvariantError("action tensors have inconsistent shapes")
        self.name = name
        if check:
            self.check()

    def check(self):
        A, L, R = self.algebra.mul, self.left, self.right
        m = self.dim
        if m == 0:
            return
        eye = np.eye(m, dtype=int)
        # e_i (e_j f) = (e_i e_j) f
        if not np.all(_es2("jub,iba->ijua", L, L) == _es2("ijk,kua->ijua", A, L)):
            raise InvariantError("left action is not associative")
        if not np.all(_es2("uib,bja->uija", R, R) == _es2("ijk,uka->uija", A, R)):
            raise InvariantError("right action is not associative")
        if not np.all(np.einsum("i,iuv->uv", self.algebra.unit, L) == eye):
            raise InvariantError("unit does not act trivially on the left")
        if not np.all(np.einsum("i,uiv->uv", self.algebra.unit, R) == eye):
            raise InvariantError("unit does not act trivially on the right")
        if not np.all(_es2("iub,bja->iuja", L, R) == _es2("ujb,iba->iuja", R, L)):
            raise InvariantError("left and right actions do not commute")

    def act_left(self, a, x):
        return np.einsum("i,u,iuv->v", frac_array(a), frac_array(x), self.left)

    def act_right(self, x, b):
        return np.einsum("u,i,uiv->v", frac_array(x), frac_array(b), self.right)

    def change_algebra_basis(self, B, P):
        """Same module over ``B = algebra.change_basis(P)``."""
        return Bimodule(B, np.einsum("ia,iuv->auv", P, self.left),
                        np.einsum("ia,uiv->uav", P, self.right), name=self.name)

    def to_json_obj(self):
        return {
            "dim": self.dim,
            "left": [[i, u, v, format_rational(x)] for (i, u, v), x in np.ndenumerate(self.left) if x != 0],
            "right": [[u, i, v, format_rational(x)] for (u, i, v), x in np.ndenumerate(self.right) if x != 0],
        }

    @classmethod
    def from_json_obj(cls, algebra, obj):
        m, n = int(obj["dim"]), algebra.dim
        L, R = _zeros((n, m, m)), _zeros((m, n, m))
        for i, u, v, x in obj["left"]:
            L[i, u, v] = parse_rational(str(x))
        for u, i, v, x in obj["right"]:
            R[u, i, v] = parse_rational(str(x))
        return cls(algebra, L, R, name=obj.get("name"))

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, dim={self.dim})"


def regular_bimodule(A):
    return Bimodule(A, A.mul, A.mul, name="A", check=False)


def enveloping(A):
    """``A^e = A (x) A^op`` with basis ``(i, j) -> i*n + j``."""
    n = A.dim
    c = A.mul
    # (e_i (x) e_j)(e_k (x) e_l) = e_i e_k (x) e_l e_j
    ce = np.einsum("iks,ljt->ijklst", c, c).reshape(n * n, n * n, n * n)
    unit = np.einsum("i,j->ij", A.unit, A.unit).reshape(n * n)
    names = [f"{a}(x){b}" for a in A.basis_names for b in A.basis_names]
    return AlgebraPresentation(ce, unit, names, name=f"{A.name}^e" if A.name else None)


def enveloping_bimodule(A, inner=False):
    """``A (x) A`` as a bimodule via the outer (default) or inner structure.

    outer: ``a.(x (x) y).b = ax (x) yb``; inner: ``a.(x (x) y).b = xb (x) ay``.
    """
    n = A.dim
    c = A.mul
    eye = np.eye(n, dtype=int)
    if not inner:
        L = np.einsum("axs,yt->axyst", c, eye).reshape(n, n * n, n * n)
        R = np.einsum("xs,ybt->xybst", eye, c).reshape(n * n, n, n * n)
    else:
        L = np.einsum("xs,ayt->axyst", eye, c).reshape(n, n * n, n * n)
        R = np.einsum("xbs,yt->xybst", c, eye).reshape(n * n, n, n * n)
    return Bimodule(A, L, R, name="A^e inner" if inner else "A^e", check=False)


def twisted_bimodule(A, phi):
    """``_phi A``: ``a.x.b = phi(a) x b`` for an algebra automorphism ``phi`` (matrix on the basis)."""
    phi = frac_array(phi)
    # phi(e_i) = sum_k phi[k, i] e_k
    L = np.einsum("ki,kuv->iuv", phi, A.mul)
    return Bimodule(A, L, A.mul, name="twisted A")


def zero_bimodule(A):
    n = A.dim
    return Bimodule(A, _zeros((n, 0, 0)), _zeros((0, n, 0)), name="0", check=False)


def bimodule_to_left_module(M):
    """Left ``A^e``-module action tensor ``L[(i,j), u, w]`` of ``(e_i (x) e_j).f_u = e_i f_u e_j``."""
    n = M.algebra.dim
    return np.einsum("iuv,vjw->ijuw", M.left, M.right).reshape(n * n, M.dim, M.dim)


def left_module_to_bimodule(A, Le):
    """Inverse of :func:`bimodule_to_left_module`."""
    n = A.dim
    Le = frac_array(Le).reshape(n, n, Le.shape[1], Le.shape[2])
    L = np.einsum("j,ijuw->iuw", A.unit, Le)
    R = np.einsum("i,ijuw->ujw", A.unit, Le)
    return Bimodule(A, L, R)


class TensorOverA:
    """``M (x)_A N`` as an explicit quotient of ``M (x)_Q N``.

    The quotient basis consists of the non-pivot columns of the reduced
    relation span; ``project`` is the canonical surjection.
    """

    def __init__(self, M, N):
        A = M.algebra
        self.M, self.N = M, N
        m, k, n = M.dim, N.dim, A.dim
        self.ambient = m * k
        rels = []
        # (f_u e_i) (x) g_w - f_u (x) (e_i g_w)
        for u in range(m):
            for i in range(n):
                for w in range(k):
                    row = {}
                    for v in range(m):
                        x = M.right[u, i, v]
                        if x:
                            row[v * k + w] = row.get(v * k + w, 0) + x
                    for t in range(k):
                        x = N.left[i, w, t]
                        if x:
                            row[u * k + t] = row.get(u * k + t, 0) - x
                    rels.append(row)
        self._rel = rref(rels, self.ambient)
        self.free = self._rel.free_columns()
        self._pos = {c: j for j, c in enumerate(self.free)}
        self.dim = len(self.free)
        d = self.dim
        L, R = _zeros((n, d, d)), _zeros((d, n, d))
        for j, c in enumerate(self.free):
            u, w = divmod(c, k)
            for i in range(n):
                left = {}
                for v in range(m):
                    x = M.left[i, u, v]
                    if x:
                        left[v * k + w] = x
                for t, y in self.project(left).items():
                    L[i, j, t] = y
                right = {}
                for t in range(k):
                    x = N.right[w, i, t]
                    if x:
                        right[u * k + t] = x
                for t, y in self.project(right).items():
                    R[j, i, t] = y
        self.bimodule = Bimodule(A, L, R, name=f"{M.name}(x)_A{N.name}")

    def project(self, v):
        """Image in the quotient basis of a vector ``{u*k + w: coeff}`` of ``M (x)_Q N``."""
        r, _ = self._rel.reduce(v)
        return {self._pos[c]: x for c, x in r.items()}

    def project_dense(self, v):
        out = _zeros(self.dim)
        for c, x in self.project({i: x for i, x in enumerate(np.asarray(v).reshape(-1)) if x}).items():
            out[c] = x
        return out

    def surjection(self):
        """``dim x (m*k)`` matrix of the canonical surjection."""
        cols = [self.project({c: 1}) for c in range(self.ambient)]
        return SparseMatrix.from_columns(self.dim, cols)

    def pair(self, x, y):
        """Class of ``x (x) y`` for dense vectors ``x`` in M and ``y`` in N."""
        k = self.N.dim
        v = {}
        for u, a in enumerate(x):
            if a:
                for w, b in enumerate(y):
                    if b:
                        v[u * k + w] = v.get(u * k + w, 0) + a * b
        return self.project(v)


def bimodule_tensor_over_A(M, N):
    """The quotient bimodule ``M (x)_A N`` together with its canonical surjection."""
    if M.algebra is not N.algebra and not np.array_equal(M.algebra.mul, N.algebra.mul):
        raise ValueError("bimodules over different algebras")
    return TensorOverA(M, N)


def _alg(mul_rules, names, name):
    """Build from rules ``{(i, j): {k: coeff}}`` on a basis whose element 0 is the unit."""
    n = len(names)
    mul = _zeros((n, n, n))
    for i in range(n):
        mul[0, i, i] = Fraction(1)
        mul[i, 0, i] = Fraction(1)
    for (i, j), out in mul_rules.items():
        for k, v in out.items():
            mul[i, j, k] = Fraction(v)
    unit = [1] + [0] * (n - 1)
    return AlgebraPresentation(mul, unit, names, name=name)


def _cyclic(order, name):
    names = ["1"] + [f"g{k}" if k > 1 else "g" for k in range(1, order)]
    rules = {(i, j): {(i + j) % order: 1} for i in range(1, order) for j in range(1, order)}
    return _alg(rules, names, name)


def _field():
    return _alg({}, ["1"], "field")


def _dual_numbers():
    return _alg({(1, 1): {}}, ["1", "eps"], "dual_numbers")


def _product():
    # e = (1, 0); e^2 = e
    return _alg({(1, 1): {1: 1}}, ["1", "e"], "product_QxQ")


def _mat2():
    # basis 1, E11, E12, E21 with E22 = 1 - E11
    one, e11, e12, e21 = range(4)
    rules = {
        (e11, e11): {e11: 1},
        (e11, e12): {e12: 1},
        (e11, e21): {},
        (e12, e11): {},
        (e12, e12): {},
        (e12, e21): {e11: 1},
        (e21, e11): {e21: 1},
        (e21, e12): {one: 1, e11: -1},
        (e21, e21): {},
    }
    return _alg(rules, ["1", "E11", "E12", "E21"], "mat2")


def _upper_triangular():
    # path algebra of 1 -> 2: idempotent e1 and arrow a with e1 a = a, a e1 = 0
    rules = {(1, 1): {1: 1}, (1, 2): {2: 1}, (2, 1): {}, (2, 2): {}}
    return _alg(rules, ["1", "e1", "a"], "upper_triangular_2")


BUILTIN_ALGEBRAS = {
    "field": _field,
    "dual_numbers": _dual_numbers,
    "product_QxQ": _product,
    "mat2": _mat2,
    "group_algebra_C2": lambda: _cyclic(2, "group_algebra_C2"),
    "group_algebra_C3": lambda: _cyclic(3, "group_algebra_C3"),
    "upper_triangular_2": _upper_triangular,
}


def builtin_algebra(name):
    try:
        return BUILTIN_ALGEBRAS[name]()
    except KeyError:
        raise UnknownName(f"unknown builtin algebra {name!r}; choose from {sorted(BUILTIN_ALGEBRAS)}") from None


def load_algebra(path):
    with open(path) as fh:
        return AlgebraPresentation.from_json_obj(json.load(fh))


def load_bimodule(algebra, path):
    with open(path) as fh:
        return Bimodule.from_json_obj(algebra, json.load(fh))
