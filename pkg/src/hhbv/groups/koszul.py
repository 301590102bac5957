"""Koszul resolutions for ``G = Z^d``, their transfer to ``A^e`` and comparison maps.

Group side: ``K_i = Q[G] (x) Lambda^i`` with elements ``{(a, S): c}``, where
``a`` is an exponent tuple and ``S`` a sorted tuple of generator indices, and

    d(e_S) = sum_t (-1)^t (x_{s_t} - 1) e_{S - s_t}.

Bimodule side: ``A^e = Q[u^{+-1}, v^{+-1}]`` with ``u = x (x) 1``,
``v = 1 (x) x``; elements of ``K_i`` are ``{(a, b, S): c}`` for
``u^a v^b e_S`` and the differential uses ``u_s - v_s``.

Exactness is certified by explicit contracting homotopies, checked exactly on
every basis element whose exponents lie in a window.
"""

from fractions import Fraction
from itertools import combinations, product

from .laurent import window

__all__ = [
    "subsets",
    "GroupResolution",
    "TransferredResolution",
    "LaurentComparison",
    "koszul_resolution",
    "transfer_resolution",
]


def _add(out, k, v):
    w = out.get(k, 0) + v
    if w:
        out[k] = w
    else:
        out.pop(k, None)


def _shift(a, k, n):
    a = list(a)
    a[k] += n
    return tuple(a)


def _geometric(n):
    """Exponents and signs of ``(x^n - 1)/(x - 1)``."""
    if n > 0:
        return [(j, 1) for j in range(n)]
    return [(j, -1) for j in range(n, 0)]


def subsets(d, i):
    return list(combinations(range(d), i))


class GroupResolution:
    """Koszul resolution of the trivial module over ``Q[Z^d]``."""

    def __init__(self, d):
        self.d = d

    @property
    def length(self):
        return self.d

    def ranks(self):
        return [len(subsets(self.d, i)) for i in range(self.d + 1)]

    def boundary(self, x):
        out = {}
        for (a, S), c in x.items():
            for t, s in enumerate(S):
                T = S[:t] + S[t + 1:]
                sg = -c if t % 2 else c
                _add(out, (_shift(a, s, 1), T), sg)
                _add(out, (a, T), -sg)
        return out

    def augmentation(self, x):
        return sum((c for (a, S), c in x.items() if not S), Fraction(0))

    def homotopy(self, x):
        """Contracting homotopy ``h`` with ``dh + hd = id - eta eps``."""
        out = {}
        zero = (0,) * self.d
        for (a, S), c in x.items():
            top = S[0] if S else self.d
            for k in range(top):
                for j, sg in _geometric(a[k]):
                    b = zero[:k] + (j,) + a[k + 1:]
                    _add(out, (b, (k,) + S), sg * c)
        return out

    def eta(self, c):
        return {((0,) * self.d, ()): Fraction(c)} if c else {}

    def verify(self, N):
        """``d^2 = 0`` and the homotopy identity on all basis elements in the window."""
        d = self.d
        ok_sq = ok_h = True
        for i in range(d + 1):
            for S in subsets(d, i):
                for a in window(d, N):
                    x = {(a, S): Fraction(1)}
                    if self.boundary(self.boundary(x)):
                        ok_sq = False
                    lhs = {}
                    for k, v in self.boundary(self.homotopy(x)).items():
                        _add(lhs, k, v)
                    for k, v in self.homotopy(self.boundary(x)).items():
                        _add(lhs, k, v)
                    rhs = dict(x)
                    if i == 0:
                        for k, v in self.eta(self.augmentation(x)).items():
                            _add(rhs, k, -v)
                    if lhs != rhs:
                        ok_h = False
        return {"d_squared": ok_sq, "homotopy": ok_h, "window": N, "ranks": self.ranks()}


def koszul_resolution(d):
    return GroupResolution(d)


class TransferredResolution:
    """``K (x)_{Q[G]} A^e``: the Koszul bimodule resolution of ``A = Q[Z^d]``."""

    def __init__(self, group):
        self.group = group
        self.d = group.d
        self.name = f"koszul_Z{self.d}"

    @property
    def length(self):
        return self.d

    def ranks(self):
        return self.group.ranks()

    def differential_entries(self, S):
        """``[(T, sign, k)]`` meaning ``d e_S`` has ``sign (u_k - v_k)`` on ``e_T``."""
        return [(S[:t] + S[t + 1:], -1 if t % 2 else 1, s) for t, s in enumerate(S)]

    def boundary(self, x):
        out = {}
        for (a, b, S), c in x.items():
            for T, sg, k in self.differential_entries(S):
                _add(out, (_shift(a, k, 1), b, T), sg * c)
                _add(out, (a, _shift(b, k, 1), T), -sg * c)
        return out

    def augmentation(self, x):
        """``mu``: ``K_0 -> A``, ``u^a v^b -> x^{a+b}``."""
        out = {}
        for (a, b, S), c in x.items():
            if not S:
                _add(out, tuple(p + q for p, q in zip(a, b)), c)
        return out

    def eta(self, p):
        zero = (0,) * self.d
        return {(w, zero, ()): c for w, c in p.items()}

    def homotopy(self, x):
        """Tensor product of the one-variable homotopies; ``dh + hd = id - eta mu``."""
        out = {}
        d = self.d
        for (a, b, S), c in x.items():
            top = S[0] if S else d
            for k in range(top):
                q = b[k]
                if q == 0:
                    continue
                head_a = tuple(a[j] + b[j] for j in range(k))
                head_b = (0,) * k
                if q > 0:
                    terms = [(j, q - 1 - j, -1) for j in range(q)]
                else:
                    terms = [(j, q - 1 - j, 1) for j in range(q, 0)]
                for j, r, sg in terms:
                    aa = head_a + (a[k] + j,) + a[k + 1:]
                    bb = head_b + (r,) + b[k + 1:]
                    _add(out, (aa, bb, (k,) + S), sg * c)
        return out

    def verify(self, N):
        """Symbolic ``d^2 = 0`` on generators, homotopy identity on the window."""
        d = self.d
        zero = (0,) * d
        ok_sq = all(not self.boundary(self.boundary({(zero, zero, S): Fraction(1)}))
                    for i in range(d + 1) for S in subsets(d, i))
        ok_h = True
        win = window(d, N)
        for i in range(d + 1):
            for S in subsets(d, i):
                for a, b in product(win, win):
                    x = {(a, b, S): Fraction(1)}
                    lhs = {}
                    for k, v in self.boundary(self.homotopy(x)).items():
                        _add(lhs, k, v)
                    for k, v in self.homotopy(self.boundary(x)).items():
                        _add(lhs, k, v)
                    rhs = dict(x)
                    if i == 0:
                        for k, v in self.eta(self.augmentation(x)).items():
                            _add(rhs, k, -v)
                    if lhs != rhs:
                        ok_h = False
                        break
        return {"d_squared": ok_sq, "homotopy": ok_h, "window": N, "ranks": self.ranks(),
                "passed": ok_sq and ok_h}

    def to_json_obj(self):
        return {
            "name": self.name,
            "length": self.d,
            "ranks": self.ranks(),
            "differentials": {
                "".join(map(str, S)) or "0": [["".join(map(str, T)) or "0", sg, k]
                                              for T, sg, k in self.differential_entries(S)]
                for i in range(1, self.d + 1) for S in subsets(self.d, i)
            },
        }


def transfer_resolution(g):
    return TransferredResolution(g)


class LaurentComparison:
    """``phi: K -> Bar`` on generators and ``psi: Bar -> K`` on monomial tuples.

    Bar elements are ``{(m_0, .., m_{i+1}): c}`` with monomial exponents.
    ``phi`` uses the bar contraction ``s(m_0, ..) = (1, m_0, ..)``; ``psi`` uses
    the Koszul homotopy, ``psi_i(1, m, 1) = h psi_{i-1} b'(1, m, 1)``.
    """

    def __init__(self, res):
        self.res = res
        self.d = res.d
        self.zero = (0,) * self.d
        self._psi = {(): {(self.zero, self.zero, ()): Fraction(1)}}
        self.phi = {(): {(self.zero, self.zero): Fraction(1)}}
        for i in range(1, self.d + 1):
            for S in subsets(self.d, i):
                self.phi[S] = self._build_phi(S)

    def _add_t(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def phi_of(self, x):
        """Extend ``phi`` ``A^e``-linearly to a Koszul element."""
        out = {}
        for (a, b, S), c in x.items():
            for t, v in self.phi[S].items():
                _add(out, (self._add_t(a, t[0]),) + t[1:-1] + (self._add_t(t[-1], b),), c * v)
        return out

    def _build_phi(self, S):
        y = self.phi_of(self.res.boundary({(self.zero, self.zero, S): Fraction(1)}))
        return {(self.zero,) + t: c for t, c in y.items()}

    def psi(self, m):
        """``psi_i(1, m_1, .., m_i, 1)`` for a tuple of exponents."""
        m = tuple(m)
        got = self._psi.get(m)
        if got is None:
            got = self.res.homotopy(self.psi_of(self._bprime(m)))
            self._psi[m] = got
        return got

    def _bprime(self, m):
        t = (self.zero,) + m + (self.zero,)
        out = {}
        for k in range(len(t) - 1):
            _add(out, t[:k] + (self._add_t(t[k], t[k + 1]),) + t[k + 2:], -1 if k % 2 else 1)
        return out

    def psi_of(self, x):
        out = {}
        for t, c in x.items():
            for (a, b, S), v in self.psi(t[1:-1]).items():
                _add(out, (self._add_t(t[0], a), self._add_t(b, t[-1]), S), c * v)
        return out

    def verify(self, N, degrees=None):
        """Chain-map equations for ``phi`` and ``psi`` on window tuples."""
        res = self.res
        ok_phi = True
        for S, val in self.phi.items():
            lhs = self._bar_boundary(val) if S else self._mu_bar(val)
            if S:
                rhs = self.phi_of(res.boundary({(self.zero, self.zero, S): Fraction(1)}))
            else:
                rhs = {self.zero: Fraction(1)}
            ok_phi = ok_phi and lhs == rhs
        ok_psi = True
        degrees = range(1, self.d + 1) if degrees is None else degrees
        win = window(self.d, N)
        for i in degrees:
            for m in product(win, repeat=i):
                lhs = res.boundary(self.psi(m))
                rhs = self.psi_of(self._bprime(m))
                if lhs != rhs:
                    ok_psi = False
                    break
        return {"phi": ok_phi, "psi": ok_psi, "passed": ok_phi and ok_psi}

    def _bar_boundary(self, x):
        out = {}
        for t, c in x.items():
            for k in range(len(t) - 1):
                _add(out, t[:k] + (self._add_t(t[k], t[k + 1]),) + t[k + 2:], -c if k % 2 else c)
        return out

    def _mu_bar(self, x):
        out = {}
        for t, c in x.items():
            _add(out, self._add_t(t[0], t[1]), c)
        return out
