"""Finite projective resolutions of A by A^e-modules of the form ``A^e e``.

An element of ``A^e`` is a vector over the basis ``e_x (x) e_y`` (index
``x*n + y``) with product ``(x (x) y)(x' (x) y') = xx' (x) y'y``.  Degree ``i``
of a resolution is ``P_i = (+)_j A^e e_ij`` for idempotents ``e_ij``.  The
differential sends the generator ``e_ij`` to ``sum_k u_kj`` with ``u_kj`` in
``e_ij A^e e_{i-1,k}``, and a general element ``w e_ij`` to ``sum_k w u_kj``.

Everything is stored inside the ambient free module ``(A^e)^{r_i}``.
"""

import json
from fractions import Fraction

import numpy as np

from ..algebra import bimodule_to_left_module, builtin_algebra, enveloping, regular_bimodule
from ..linalg import (
    SparseMatrix,
    format_rational,
    image_basis,
    kernel_basis,
    parse_rational,
    rank,
    solve,
)
from ..linalg.subquotient import SubquotientSpace

__all__ = [
    "ResolutionComplex",
    "NotExact",
    "verify_resolution",
    "builtin_resolution",
    "separability_idempotent",
    "periodic_dual_numbers_resolution",
    "resolution_homology",
    "resolution_cohomology",
    "BUILTIN_RESOLUTIONS",
]


class NotExact(ValueError):
    """A resolution fails to be exact at the reported spot."""

    def __init__(self, spot, message):
        super().__init__(f"{spot}: {message}")
        self.spot = spot


def _vec(v, n):
    out = np.zeros(n, dtype=object)
    out[...] = Fraction(0)
    for i, x in enumerate(v):
        out[i] = Fraction(x)
    return out


class ResolutionComplex:
    """``0 -> P_d -> ... -> P_0 -> A -> 0`` with idempotent summands.

    ``summands[i]`` lists the idempotents of degree ``i``;
    ``differentials[i-1][k][j]`` is the component in summand ``k`` of
    ``P_{i-1}`` of the image of generator ``j`` of ``P_i``;
    ``augmentation[j]`` is the image in A of generator ``j`` of ``P_0``.
    ``truncated`` marks a resolution that is only exact below its top degree.
    """

    def __init__(self, algebra, summands, differentials, augmentation, name=None, truncated=False):
        self.algebra = algebra
        n = algebra.dim
        self.n2 = n * n
        self.summands = [[_vec(e, self.n2) for e in deg] for deg in summands]
        self.differentials = [[[_vec(u, self.n2) for u in row] for row in D] for D in differentials]
        self.augmentation = [_vec(a, n) for a in augmentation]
        self.name = name
        self.truncated = truncated
        if len(self.differentials) != len(self.summands) - 1:
            raise ValueError("need one differential per positive degree")
        for i, D in enumerate(self.differentials, start=1):
            if len(D) != self.rank(i - 1) or any(len(row) != self.rank(i) for row in D):
                raise ValueError(f"differential {i} has the wrong shape")
        if len(self.augmentation) != self.rank(0):
            raise ValueError("augmentation needs one value per generator of P_0")
        self._cache = {}

    @property
    def length(self):
        return len(self.summands) - 1

    @property
    def ranks(self):
        return [len(s) for s in self.summands]

    def rank(self, i):
        return len(self.summands[i]) if 0 <= i <= self.length else 0

    @property
    def envelope(self):
        if "E" not in self._cache:
            self._cache["E"] = enveloping(self.algebra)
        return self._cache["E"]

    # multiplication in A^e -------------------------------------------------
    def emul(self, w, u):
        return np.einsum("s,t,stk->k", w, u, self.envelope.mul)

    def _right_matrix(self, u):
        """``w -> w u`` on A^e."""
        M = np.einsum("stk,t->ks", self.envelope.mul, u)
        return SparseMatrix.from_dense(M)

    def _left_matrix(self, u):
        """``w -> u w`` on A^e."""
        M = np.einsum("s,stk->kt", u, self.envelope.mul)
        return SparseMatrix.from_dense(M)

    def ambient_dim(self, i):
        return self.rank(i) * self.n2

    def summand_basis(self, i):
        """Columns spanning ``P_i`` inside ``(A^e)^{r_i}``."""
        key = ("basis", i)
        if key not in self._cache:
            cols = []
            for j, e in enumerate(self.summands[i]):
                for col in image_basis(self._right_matrix(e)).column_dicts():
                    cols.append({j * self.n2 + t: x for t, x in col.items()})
            self._cache[key] = SparseMatrix.from_columns(self.ambient_dim(i), cols)
        return self._cache[key]

    def dim(self, i):
        return self.summand_basis(i).cols

    def projection(self, i):
        """``(w_j) -> (w_j e_ij)``, the idempotent projection onto ``P_i``."""
        key = ("proj", i)
        if key not in self._cache:
            ents = []
            for j, e in enumerate(self.summands[i]):
                for r, c, v in self._right_matrix(e).entries:
                    ents.append((j * self.n2 + r, j * self.n2 + c, v))
            self._cache[key] = SparseMatrix(self.ambient_dim(i), self.ambient_dim(i), ents)
        return self._cache[key]

    def differential(self, i):
        """Ambient matrix of ``P_i -> P_{i-1}`` composed with the projection onto ``P_i``."""
        key = ("d", i)
        if key not in self._cache:
            ents = {}
            for k, row in enumerate(self.differentials[i - 1]):
                for j, u in enumerate(row):
                    if not any(u):
                        continue
                    for r, c, v in self._right_matrix(u).entries:
                        key2 = (k * self.n2 + r, j * self.n2 + c)
                        ents[key2] = ents.get(key2, 0) + v
            D = SparseMatrix(self.ambient_dim(i - 1), self.ambient_dim(i),
                             [(r, c, v) for (r, c), v in ents.items() if v])
            self._cache[key] = D @ self.projection(i)
        return self._cache[key]

    def augmentation_matrix(self):
        """Ambient matrix of ``P_0 -> A``: ``(w_j) -> sum_j w_j . eps_j``."""
        if "aug" not in self._cache:
            act = bimodule_to_left_module(regular_bimodule(self.algebra))
            n = self.algebra.dim
            ents = {}
            for j, a in enumerate(self.augmentation):
                img = np.einsum("suv,u->sv", act, a)  # (x (x) y) . a
                for s in range(self.n2):
                    for v in range(n):
                        if img[s, v]:
                            ents[(v, j * self.n2 + s)] = img[s, v]
            m = SparseMatrix(n, self.ambient_dim(0), [(r, c, x) for (r, c), x in ents.items()])
            self._cache["aug"] = m @ self.projection(0)
        return self._cache["aug"]

    # serialization --------------------------------------------------------
    def to_json_obj(self):
        def vec(v):
            return [[i, format_rational(x)] for i, x in enumerate(v) if x]

        return {
            "name": self.name,
            "truncated": self.truncated,
            "summands": [[vec(e) for e in deg] for deg in self.summands],
            "differentials": [[[vec(u) for u in row] for row in D] for D in self.differentials],
            "augmentation": [vec(a) for a in self.augmentation],
        }

    @classmethod
    def from_json_obj(cls, algebra, obj):
        n2 = algebra.dim ** 2

        def vec(v, size):
            out = [Fraction(0)] * size
            for i, x in v:
                out[int(i)] = parse_rational(x) if isinstance(x, str) else Fraction(x)
            return out

        return cls(
            algebra,
            [[vec(e, n2) for e in deg] for deg in obj["summands"]],
            [[[vec(u, n2) for u in row] for row in D] for D in obj["differentials"]],
            [vec(a, algebra.dim) for a in obj["augmentation"]],
            name=obj.get("name"),
            truncated=bool(obj.get("truncated", False)),
        )

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def __repr__(self):
        return f"ResolutionComplex({self.name!r}, ranks={self.ranks})"


def _is_zero(m):
    return isinstance(m, SparseMatrix) and m.is_zero()


def verify_resolution(res, strict=False):
    """Idempotents, compatibility of the differentials, d^2 = 0 and exactness by ranks.

    Returns a report dict; with ``strict`` a failure raises NotExact.
    """
    checks = []

    def add(name, ok, detail=None):
        checks.append({"check": name, "status": "pass" if ok else "fail", "detail": detail})
        if strict and not ok:
            raise NotExact(name, detail or "failed")

    for i, deg in enumerate(res.summands):
        for j, e in enumerate(deg):
            add(f"idempotent[{i}][{j}]", bool(np.all(res.emul(e, e) == e)))
    for i, D in enumerate(res.differentials, start=1):
        ok = True
        for k, row in enumerate(D):
            for j, u in enumerate(row):
                left = res.emul(res.summands[i][j], u)
                right = res.emul(u, res.summands[i - 1][k])
                ok = ok and bool(np.all(left == u)) and bool(np.all(right == u))
        add(f"compatible[{i}]", ok)
    d = res.length
    for i in range(2, d + 1):
        add(f"d_squared[{i}]", _is_zero(res.differential(i - 1) @ res.differential(i)))
    aug = res.augmentation_matrix()
    if d >= 1:
        add("augmentation_kills_image", _is_zero(aug @ res.differential(1)))
    B = [res.summand_basis(i) for i in range(d + 1)]
    ranks = [rank(res.differential(i) @ B[i]) if i >= 1 else 0 for i in range(d + 1)]
    aug_rank = rank(aug @ B[0])
    add("augmentation_onto", aug_rank == res.algebra.dim, f"rank {aug_rank} of {res.algebra.dim}")
    nxt = ranks[1] if d >= 1 else 0
    add("exact[0]", res.dim(0) - aug_rank == nxt, f"ker {res.dim(0) - aug_rank}, im {nxt}")
    for i in range(1, d + 1):
        ker = res.dim(i) - ranks[i]
        im = ranks[i + 1] if i < d else 0
        if i == d and res.truncated:
            checks.append({"check": f"exact[{i}]", "status": "skipped", "detail": "truncated top degree"})
            continue
        add(f"exact[{i}]", ker == im, f"ker {ker}, im {im}")
    passed = all(c["status"] != "fail" for c in checks)
    return {
        "resolution": res.name,
        "length": d,
        "ranks": res.ranks,
        "dims": [res.dim(i) for i in range(d + 1)],
        "truncated": res.truncated,
        "pdim_upper_bound": None if res.truncated else d,
        "checks": checks,
        "passed": passed,
    }


# ------------------------------------------------------------------ coefficients


def _right_action(M):
    """``R[(x,y), u, w]``: ``f_u . (e_x (x) e_y) = e_y f_u e_x``."""
    n = M.algebra.dim
    L = bimodule_to_left_module(M).reshape(n, n, M.dim, M.dim)
    return np.transpose(L, (1, 0, 2, 3)).reshape(n * n, M.dim, M.dim)


def _act_matrix(T, u):
    """Matrix of ``m -> u acting on m`` for an action tensor ``T[s, m, w]``."""
    return SparseMatrix.from_dense(np.einsum("s,smw->wm", u, T))


def _block(res, i, m, fn):
    """Block-diagonal ambient matrix on ``M^{r_i}`` with blocks ``fn(e_ij)``."""
    ents = []
    for j, e in enumerate(res.summands[i]):
        for r, c, v in fn(e).entries:
            ents.append((j * m + r, j * m + c, v))
    return SparseMatrix(res.rank(i) * m, res.rank(i) * m, ents)


def resolution_homology(res, M, degrees=None):
    """``H_r(M (x)_{A^e} P)`` for ``M`` a bimodule; ``M e_j`` is the summand of generator ``j``.

    Returns ``{r: (SubquotientSpace, projection)}``; the top degree of a
    truncated resolution is omitted.
    """
    R = _right_action(M)
    m = M.dim
    d = res.length
    proj = {i: _block(res, i, m, lambda e: _act_matrix(R, e)) for i in range(d + 1)}

    def diff(i):
        ents = {}
        for k, row in enumerate(res.differentials[i - 1]):
            for j, u in enumerate(row):
                for r, c, v in _act_matrix(R, u).entries:
                    ents[(k * m + r, j * m + c)] = ents.get((k * m + r, j * m + c), 0) + v
        D = SparseMatrix(res.rank(i - 1) * m, res.rank(i) * m, [(r, c, v) for (r, c), v in ents.items() if v])
        return D @ proj[i]

    D = {i: diff(i) for i in range(1, d + 1)}
    top = d - 1 if res.truncated else d
    out = {}
    for r in range(top + 1):
        if degrees is not None and r not in degrees:
            continue
        S = image_basis(proj[r])
        Z = kernel_basis(D[r] @ S) if r >= 1 else SparseMatrix.identity(S.cols)
        Z = S @ Z
        B = image_basis(D[r + 1]) if r + 1 <= d else SparseMatrix(res.rank(r) * m, 0)
        out[r] = SubquotientSpace(res.rank(r) * m, Z, B)
    return out


def resolution_cohomology(res, M, degrees=None):
    """``H^p(Hom_{A^e}(P, M))`` with ``Hom(A^e e, M) = e M``; same conventions as above."""
    Lt = bimodule_to_left_module(M)
    m = M.dim
    d = res.length
    proj = {i: _block(res, i, m, lambda e: _act_matrix(Lt, e)) for i in range(d + 1)}

    def codiff(i):
        """``Hom(P_{i-1}) -> Hom(P_i)``: ``(v_k) -> (sum_k u_kj v_k)_j``."""
        ents = {}
        for k, row in enumerate(res.differentials[i - 1]):
            for j, u in enumerate(row):
                for r, c, v in _act_matrix(Lt, u).entries:
                    ents[(j * m + r, k * m + c)] = ents.get((j * m + r, k * m + c), 0) + v
        D = SparseMatrix(res.rank(i) * m, res.rank(i - 1) * m, [(r, c, v) for (r, c), v in ents.items() if v])
        return D @ proj[i - 1]

    D = {i: codiff(i) for i in range(1, d + 1)}
    top = d - 1 if res.truncated else d
    out = {}
    for p in range(top + 1):
        if degrees is not None and p not in degrees:
            continue
        S = image_basis(proj[p])
        Z = S @ kernel_basis(D[p + 1] @ S) if p + 1 <= d else S
        B = image_basis(D[p]) if p >= 1 else SparseMatrix(res.rank(p) * m, 0)
        out[p] = SubquotientSpace(res.rank(p) * m, Z, B)
    return out


# ------------------------------------------------------------------ builtins


def separability_idempotent(A):
    """Solve ``(a (x) 1) e = (1 (x) a) e`` for all ``a`` and ``mu(e) = 1``; None if A is not separable.

    Any solution is automatically idempotent.
    """
    n = A.dim
    E = enveloping(A)
    rows = []
    rhs = []
    for a in range(n):
        ea = np.zeros(n, dtype=object)
        ea[...] = 0
        ea[a] = 1
        la = np.einsum("i,j->ij", ea, A.unit).reshape(n * n)
        ra = np.einsum("i,j->ij", A.unit, ea).reshape(n * n)
        diff = np.einsum("s,stk->kt", la - ra, E.mul)
        for r in range(n * n):
            rows.append(list(diff[r]))
            rhs.append(0)
    # mu(x (x) y) = xy
    mu = np.einsum("xyk->kxy", A.mul).reshape(n, n * n)
    for k in range(n):
        rows.append(list(mu[k]))
        rhs.append(A.unit[k])
    x = solve(rows, rhs)
    return None if x is None else x


def _unit_e(A):
    return np.einsum("i,j->ij", A.unit, A.unit).reshape(A.dim ** 2)


def _separable_resolution(A):
    e = separability_idempotent(A)
    if e is None:
        raise ValueError(f"{A.name} is not separable")
    return ResolutionComplex(A, [[e]], [], [A.unit], name=f"{A.name}: separable, length 0")


def _elem(A, x, y):
    """``e_x (x) e_y`` as a vector; ``x``/``y`` may be basis indices or vectors."""
    n = A.dim

    def v(t):
        if isinstance(t, int):
            out = [0] * n
            out[t] = 1
            return np.array(out, dtype=object)
        return np.asarray(t, dtype=object)

    return np.einsum("i,j->ij", v(x), v(y)).reshape(n * n)


def _upper_triangular_resolution(A):
    # 0 -> A e1 (x) e2 A -> A e1 (x) e1 A (+) A e2 (x) e2 A -> A, with e2 = 1 - e1
    a = 2
    v1 = np.array([0, 1, 0], dtype=object)
    v2 = np.array([1, -1, 0], dtype=object)
    f1, f2 = _elem(A, v1, v1), _elem(A, v2, v2)
    g = _elem(A, v1, v2)
    # image of g: a (x) e2 in the e2 summand, minus e1 (x) a in the e1 summand
    u_e1 = -_elem(A, v1, a)
    u_e2 = _elem(A, a, v2)
    return ResolutionComplex(A, [[f1, f2], [g]], [[[u_e1], [u_e2]]], [v1, v2],
                             name="upper_triangular_2: path algebra, length 1")


def periodic_dual_numbers_resolution(length):
    """The 2-periodic free resolution of ``Q[eps]`` truncated after degree ``length``.

    Differentials alternate ``eps (x) 1 - 1 (x) eps`` (odd) and
    ``eps (x) 1 + 1 (x) eps`` (even).
    """
    A = builtin_algebra("dual_numbers")
    one = _unit_e(A)
    odd = _elem(A, 1, 0) - _elem(A, 0, 1)
    even = _elem(A, 1, 0) + _elem(A, 0, 1)
    diffs = [[[odd if i % 2 else even]] for i in range(1, length + 1)]
    return ResolutionComplex(A, [[one]] * (length + 1), diffs, [A.unit],
                             name=f"dual_numbers: periodic, truncated at {length}", truncated=True)


BUILTIN_RESOLUTIONS = {
    "field": _separable_resolution,
    "product_QxQ": _separable_resolution,
    "mat2": _separable_resolution,
    "group_algebra_C2": _separable_resolution,
    "group_algebra_C3": _separable_resolution,
    "upper_triangular_2": _upper_triangular_resolution,
}


def builtin_resolution(A):
    """Resolution from the catalog for a builtin algebra (by name)."""
    if A.name == "dual_numbers":
        raise ValueError("dual_numbers has no finite resolution; use periodic_dual_numbers_resolution")
    try:
        make = BUILTIN_RESOLUTIONS[A.name]
    except KeyError:
        raise KeyError(f"no builtin resolution for {A.name!r}") from None
    return make(A)

