"""Comparison maps between a resolution ``P`` and the bar resolution.

Bar elements of degree ``i`` are dicts ``{(a_0, a_1, .., a_i, a_{i+1}): coeff}``
over basis indices; ``A^e`` acts by ``(x (x) y).(a_0, .., a_{i+1}) =
(x a_0, .., a_{i+1} y)``.  Elements of ``P_i`` are dicts over the ambient
index ``j*n^2 + s``.

``phi: P -> Bar`` is built with the contracting homotopy
``s(a_0, ..) = (1, a_0, ..)`` of the bar resolution; ``psi: Bar -> P`` is
solved degree by degree.  Both homotopies are computed and checked.
"""

from fractions import Fraction
from itertools import product

from ..linalg import solve_many
from .resolution import NotExact

__all__ = ["ComparisonMaps", "LiftFailed", "lift_chain_map", "bar_differential"]


class LiftFailed(ValueError):
    """No lift exists; the resolution is not exact where it was needed."""


def _add(out, k, v):
    w = out.get(k, 0) + v
    if w:
        out[k] = w
    else:
        out.pop(k, None)


def _mul_struct(A):
    mul = {}
    for i in range(A.dim):
        for j in range(A.dim):
            for k in range(A.dim):
                if A.mul[i, j, k]:
                    mul.setdefault((i, j), []).append((k, Fraction(A.mul[i, j, k])))
    return mul


def bar_differential(A, x, mul=None):
    """``b'(a_0, .., a_{i+1}) = sum_k (-1)^k (.., a_k a_{k+1}, ..)``."""
    mul = mul or _mul_struct(A)
    out = {}
    for t, c in x.items():
        for k in range(len(t) - 1):
            s = -c if k % 2 else c
            for m, w in mul.get((t[k], t[k + 1]), ()):
                _add(out, t[:k] + (m,) + t[k + 2:], s * w)
    return out


class ComparisonMaps:
    """``phi``, ``psi`` and the homotopies, all determined on generators."""

    def __init__(self, res, top):
        A = res.algebra
        if not A.unit_is_first:
            raise ValueError("the unit must be basis element 0")
        self.res = res
        self.A = A
        self.n = A.dim
        self.n2 = res.n2
        self.top = top
        self.mul = _mul_struct(A)
        E = res.envelope
        self.emul = {}
        for s in range(self.n2):
            for t in range(self.n2):
                for k in range(self.n2):
                    if E.mul[s, t, k]:
                        self.emul.setdefault((s, t), []).append((k, Fraction(E.mul[s, t, k])))
        self.phi = {}
        self.psi = {}
        self.hP = {}
        self.hB = {}
        self.checks = []
        self._build_phi()
        self._build_psi()
        self._build_homotopies()

    # actions ---------------------------------------------------------------
    def act_bar(self, w, x):
        """``w . x`` for ``w`` a dict over ``A^e`` and ``x`` a bar element."""
        out = {}
        n = self.n
        for s, c in w.items():
            xa, ya = divmod(s, n)
            for t, v in x.items():
                for k0, w0 in self.mul.get((xa, t[0]), ()):
                    for k1, w1 in self.mul.get((t[-1], ya), ()):
                        _add(out, (k0,) + t[1:-1] + (k1,), c * v * w0 * w1)
        return out

    def act_P(self, w, v):
        """Left multiplication of every component of ``v`` in ``P_i`` by ``w``."""
        out = {}
        for idx, c in v.items():
            j, t = divmod(idx, self.n2)
            for s, a in w.items():
                for k, m in self.emul.get((s, t), ()):
                    _add(out, j * self.n2 + k, a * c * m)
        return out

    def _gen(self, i, j):
        e = self.res.summands[i][j]
        return {s: Fraction(x) for s, x in enumerate(e) if x}

    def _comp(self, i, j, v):
        """Component ``j`` of ``v`` as a dict over ``A^e``."""
        lo = j * self.n2
        return {idx - lo: c for idx, c in v.items() if lo <= idx < lo + self.n2}

    # phi --------------------------------------------------------------------
    def phi_of(self, i, v):
        out = {}
        for j in range(self.res.rank(i)):
            w = self._comp(i, j, v)
            if w:
                for k, c in self.act_bar(w, self.phi[i][j]).items():
                    _add(out, k, c)
        return out

    def _boundary_P(self, i, j):
        """``d(e_ij)`` as an element of ``P_{i-1}``."""
        out = {}
        for k, row in enumerate(self.res.differentials[i - 1]):
            for s, x in enumerate(row[j]):
                if x:
                    out[k * self.n2 + s] = Fraction(x)
        return out

    def _build_phi(self):
        res = self.res
        self.phi[0] = []
        for j, eps in enumerate(res.augmentation):
            x = {(a, 0): Fraction(c) for a, c in enumerate(eps) if c}
            self.phi[0].append(self.act_bar(self._gen(0, j), x))
        for i in range(1, min(self.top, res.length) + 1):
            self.phi[i] = []
            for j in range(res.rank(i)):
                y = self.phi_of(i - 1, self._boundary_P(i, j))
                sy = {(0,) + t: c for t, c in y.items()}
                self.phi[i].append(self.act_bar(self._gen(i, j), sy))
        for i in range(min(self.top, res.length) + 1):
            for j in range(res.rank(i)):
                lhs = bar_differential(self.A, self.phi[i][j], self.mul) if i else self._mu(self.phi[0][j])
                rhs = (self.phi_of(i - 1, self._boundary_P(i, j)) if i
                       else {a: Fraction(c) for a, c in enumerate(res.augmentation[j]) if c})
                self._check(f"phi_chain_map[{i}][{j}]", lhs == rhs)

    def _mu(self, x):
        out = {}
        for t, c in x.items():
            for k, w in self.mul.get((t[0], t[1]), ()):
                _add(out, k, c * w)
        return out

    # psi --------------------------------------------------------------------
    def psi_of(self, i, x):
        """``psi_i`` of a bar element of degree ``i``."""
        out = {}
        n = self.n
        for t, c in x.items():
            w = {t[0] * n + t[-1]: c}
            for k, v in self.act_P(w, self.psi[i][t[1:-1]]).items():
                _add(out, k, v)
        return out

    def _solve_in(self, i, targets, what):
        """Solve ``d_i x = t`` in ``P_i`` (``i = 0``: augmentation) for each target."""
        res = self.res
        m = res.differential(i) if i else res.augmentation_matrix()
        sols = solve_many(m, targets)
        out = []
        proj = res.projection(i)
        for t, s in zip(targets, sols):
            if s is None:
                raise LiftFailed(f"{what}: no preimage in degree {i}")
            out.append({r: v for r, v in enumerate(proj.matvec(s)) if v})
        return out

    def _build_psi(self):
        res, n = self.res, self.n
        top = min(self.top, res.length)
        unit = {a: Fraction(c) for a, c in enumerate(self.A.unit) if c}
        (p0,) = self._solve_in(0, [unit], "psi")
        self.psi[0] = {(): p0}
        for i in range(1, top + 1):
            gens = list(product(range(n), repeat=i))
            targets = []
            for a in gens:
                g = {(0,) + a + (0,): Fraction(1)}
                targets.append(self.psi_of(i - 1, bar_differential(self.A, g, self.mul)))
            sols = self._solve_in(i, targets, "psi")
            self.psi[i] = dict(zip(gens, sols))
        for i in range(top + 1):
            for a in product(range(n), repeat=i):
                g = {(0,) + a + (0,): Fraction(1)}
                if i:
                    lhs = self._apply_d(i, self.psi[i][a])
                    rhs = self.psi_of(i - 1, bar_differential(self.A, g, self.mul))
                else:
                    lhs = {r: v for r, v in enumerate(res.augmentation_matrix().matvec(self.psi[0][()])) if v}
                    rhs = unit
                if lhs != rhs:
                    self._check(f"psi_chain_map[{i}]", False)
                    break
            else:
                self._check(f"psi_chain_map[{i}]", True)

    def _apply_d(self, i, v):
        return {r: x for r, x in enumerate(self.res.differential(i).matvec(v)) if x}

    # homotopies -----------------------------------------------------------
    def _build_homotopies(self):
        res, n = self.res, self.n
        d = res.length
        top = min(self.top, d)
        # P side: psi phi - id = d h + h d
        for i in range(top + 1):
            targets = []
            for j in range(res.rank(i)):
                t = self.psi_of(i, self.phi[i][j])
                for k, c in self._gen_P(i, j).items():
                    _add(t, k, -c)
                if i:
                    for k, c in self._hP_of(i - 1, self._boundary_P(i, j)).items():
                        _add(t, k, -c)
                targets.append(t)
            if i + 1 > d:
                ok = all(not t for t in targets)
                if res.truncated and i == d:
                    self.checks.append({"check": f"homotopy_P[{i}]", "status": "skipped"})
                else:
                    self._check(f"homotopy_P[{i}]", ok)
                self.hP[i] = [{} for _ in targets]
                continue
            sols = self._solve_in(i + 1, targets, "homotopy")
            self.hP[i] = [self.act_P(self._gen(i, j), s) for j, s in enumerate(sols)]
            for j in range(res.rank(i)):
                lhs = self._apply_d(i + 1, self.hP[i][j])
                if i:
                    for k, c in self._hP_of(i - 1, self._boundary_P(i, j)).items():
                        _add(lhs, k, c)
                rhs = self.psi_of(i, self.phi[i][j])
                for k, c in self._gen_P(i, j).items():
                    _add(rhs, k, -c)
                if lhs != rhs:
                    self._check(f"homotopy_P[{i}]", False)
                    break
            else:
                self._check(f"homotopy_P[{i}]", True)
        # bar side: phi psi - id = b' H + H b'
        for i in range(top + 1):
            self.hB[i] = {}
            for a in product(range(n), repeat=i):
                g = {(0,) + a + (0,): Fraction(1)}
                t = self.phi_of(i, self.psi[i][a])
                _add(t, (0,) + a + (0,), -1)
                if i:
                    for k, c in self._hB_of(i - 1, bar_differential(self.A, g, self.mul)).items():
                        _add(t, k, -c)
                self.hB[i][a] = {(0,) + k: c for k, c in t.items()}
            ok = True
            for a in product(range(n), repeat=i):
                g = {(0,) + a + (0,): Fraction(1)}
                lhs = bar_differential(self.A, self.hB[i][a], self.mul)
                if i:
                    for k, c in self._hB_of(i - 1, bar_differential(self.A, g, self.mul)).items():
                        _add(lhs, k, c)
                rhs = self.phi_of(i, self.psi[i][a])
                _add(rhs, (0,) + a + (0,), -1)
                if lhs != rhs:
                    ok = False
                    break
            self._check(f"homotopy_bar[{i}]", ok)

    def _gen_P(self, i, j):
        return {j * self.n2 + s: c for s, c in self._gen(i, j).items()}

    def _hP_of(self, i, v):
        out = {}
        for j in range(self.res.rank(i)):
            w = self._comp(i, j, v)
            if w:
                for k, c in self.act_P(w, self.hP[i][j]).items():
                    _add(out, k, c)
        return out

    def _hB_of(self, i, x):
        out = {}
        n = self.n
        for t, c in x.items():
            w = {t[0] * n + t[-1]: c}
            for k, v in self.act_bar(w, self.hB[i][t[1:-1]]).items():
                _add(out, k, v)
        return out

    def _check(self, name, ok):
        self.checks.append({"check": name, "status": "pass" if ok else "fail"})

    @property
    def passed(self):
        return all(c["status"] != "fail" for c in self.checks)

    def report(self):
        return {"top": self.top, "checks": list(self.checks), "passed": self.passed}


def lift_chain_map(res, top=None):
    """Comparison maps up to degree ``top`` (default: the length of ``res``)."""
    top = res.length if top is None else top
    maps = ComparisonMaps(res, top)
    if not maps.passed:
        bad = [c["check"] for c in maps.checks if c["status"] == "fail"]
        raise NotExact(bad[0], "comparison maps do not satisfy their equations")
    return maps
