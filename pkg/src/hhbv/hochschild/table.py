"""Hochschild (co)homology tables in degrees below a truncation P."""

import json
from fractions import Fraction

from ..algebra import regular_bimodule
from ..linalg import NotACycle, SparseMatrix, format_rational, image_basis, kernel_basis
from ..linalg.subquotient import SubquotientSpace
from ..tt_calculus import TTCalculus
from .chains import (
    Cochain,
    DegreeError,
    cap,
    chain_differential,
    cochain_differential,
    connes_boundary,
    cup,
    gerstenhaber_bracket,
    is_regular,
    unit_cochain,
)
from .complexes import NormalizedBasis, chain_matrix, cochain_matrix

__all__ = ["HochschildTable", "compute_table", "induce_on_classes", "export_calculus", "NotACycle"]


class HochschildTable:
    """``H^p(A,M)`` and ``H_r(A,M)`` for ``0 <= p, r <= P-1`` on normalized complexes.

    Degree ``P`` itself is never reported: its cocycles are known but the
    classes would need the next differential, so it is marked provisional.
    """

    def __init__(self, algebra, module, P, cohomology, homology, coh_bases, hom_bases, differentials):
        self.algebra = algebra
        self.module = module
        self.P = P
        self.cohomology = cohomology
        self.homology = homology
        self.coh_bases = coh_bases
        self.hom_bases = hom_bases
        self.differentials = differentials
        self.provisional = [P]

    @property
    def coh_dims(self):
        return [self.cohomology[p].dim for p in range(self.P)]

    @property
    def hom_dims(self):
        return [self.homology[r].dim for r in range(self.P)]

    # representatives -----------------------------------------------------
    def cocycle(self, p, coords, dense=True):
        vec = self.cohomology[p].lift_of(coords)
        basis = self.coh_bases[p]
        if dense:
            return basis.embed_dense(vec, self.algebra, self.module)
        return basis.from_vector(vec, self.algebra, self.module)

    def cycle(self, r, coords, dense=True):
        vec = self.homology[r].lift_of(coords)
        basis = self.hom_bases[r]
        if dense:
            return basis.embed_dense(vec, self.algebra, self.module)
        return basis.from_vector(vec, self.algebra, self.module)

    def class_basis_cocycles(self, p):
        return [self.cocycle(p, _unit_vec(self.cohomology[p].dim, i)) for i in range(self.cohomology[p].dim)]

    def class_basis_cycles(self, r):
        return [self.cycle(r, _unit_vec(self.homology[r].dim, i)) for i in range(self.homology[r].dim)]

    def class_of_cochain(self, f):
        """Class of a normalized cocycle; raises NotACycle otherwise."""
        p = f.degree
        if p not in self.cohomology:
            raise DegreeError(f"degree {p} is outside the certified range")
        basis = self.coh_bases[p]
        vec = basis.to_vector(f)
        full = f.sparse()
        if sum(1 for t, v in full.items() if v and 0 in t[:-1]):
            raise ValueError("cochain is not normalized")
        return self.cohomology[p].class_of(vec)

    def class_of_chain(self, z):
        """Class of a cycle, read in the normalized quotient; raises NotACycle otherwise."""
        r = z.degree
        if r not in self.homology:
            raise DegreeError(f"degree {r} is outside the certified range")
        return self.homology[r].class_of(self.hom_bases[r].to_vector(z))

    def to_json_obj(self):
        def space(s):
            return {
                "dim": s.dim,
                "class_basis": [[[i, format_rational(x)] for i, x in sorted(v.items())] for v in s.class_basis],
            }

        return {
            "algebra": self.algebra.name,
            "module": self.module.name,
            "P": self.P,
            "provisional_degrees": self.provisional,
            "cohomology_dims": self.coh_dims,
            "homology_dims": self.hom_dims,
            "cohomology": {str(p): space(s) for p, s in sorted(self.cohomology.items())},
            "homology": {str(r): space(s) for r, s in sorted(self.homology.items())},
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _unit_vec(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def compute_table(algebra, module=None, P=6):
    """Hochschild cohomology and homology of ``algebra`` with coefficients ``module``."""
    if P < 1:
        raise ValueError("P must be at least 1")
    if not algebra.unit_is_first:
        raise ValueError("the unit must be basis element 0 (use AlgebraPresentation.with_unit_first)")
    A = algebra
    M = module if module is not None else regular_bimodule(A)
    n, m = A.dim, M.dim
    delta = {p: cochain_matrix(A, M, p) for p in range(P)}
    bd = {r: chain_matrix(A, M, r) for r in range(1, P + 1)}
    coh, hom, cb, hb = {}, {}, {}, {}
    for p in range(P):
        basis = NormalizedBasis(n, m, p, chains=False)
        cb[p] = basis
        Z = kernel_basis(delta[p])
        B = image_basis(delta[p - 1]) if p >= 1 else SparseMatrix(basis.dim, 0)
        coh[p] = SubquotientSpace(basis.dim, Z, B)
    for r in range(P):
        basis = NormalizedBasis(n, m, r, chains=True)
        hb[r] = basis
        Z = kernel_basis(bd[r]) if r >= 1 else SparseMatrix.identity(basis.dim)
        B = image_basis(bd[r + 1])
        hom[r] = SubquotientSpace(basis.dim, Z, B)
    return HochschildTable(A, M, P, coh, hom, cb, hb, {"cochain": delta, "chain": bd})


def induce_on_classes(table, op, inputs, check_representatives=True):
    """Apply a chain-level operation to class representatives and return the class.

    ``inputs`` is a list of ``("H^", p, coords)`` or ``("H_", r, coords)``.
    The output is verified to be a (co)cycle; with ``check_representatives``
    every input is also shifted by a (co)boundary and the class is required
    not to change.
    """
    reps = [_rep(table, kind, deg, coords) for kind, deg, coords in inputs]
    out = op(*reps)
    cls = _class(table, out)
    if check_representatives:
        shifted = [_rep(table, kind, deg, coords, shift=True) for kind, deg, coords in inputs]
        cls2 = _class(table, op(*shifted))
        if cls2 != cls:
            raise NotACycle("class depends on the chosen representative")
    return cls


def _class(table, x):
    if isinstance(x, Cochain):
        return table.class_of_cochain(x)
    return table.class_of_chain(x)


def _rep(table, kind, deg, coords, shift=False):
    if kind == "H^":
        f = table.cocycle(deg, coords)
        if shift and deg >= 1:
            g = table.coh_bases[deg - 1]
            if g.dim:
                # add b(g) for the first basis cochain of degree deg-1
                h = g.embed_dense({0: Fraction(1)}, table.algebra, table.module)
                f = f + cochain_differential(h)
        return f
    z = table.cycle(deg, coords)
    if shift and deg + 1 in table.hom_bases and table.hom_bases[deg + 1].dim:
        w = table.hom_bases[deg + 1].embed_dense({0: Fraction(1)}, table.algebra, table.module)
        z = z + chain_differential(w)
    return z


def export_calculus(table):
    """Tamarkin-Tsygan calculus of the table (coefficients must be A).

    Entries whose output degree is not certified are left undefined.
    """
    A, M, P = table.algebra, table.module, table.P
    if not is_regular(M):
        raise ValueError("the calculus needs coefficients in A")
    coh_idx, hom_idx = [], []
    coh_deg, hom_deg, coh_lab, hom_lab = [], [], [], []
    for p in range(P):
        for i in range(table.cohomology[p].dim):
            coh_idx.append((p, i))
            coh_deg.append(p)
            coh_lab.append(f"H^{p}[{i}]")
    for r in range(P):
        for i in range(table.homology[r].dim):
            hom_idx.append((r, i))
            hom_deg.append(r)
            hom_lab.append(f"H_{r}[{i}]")
    gcoh = {t: g for g, t in enumerate(coh_idx)}
    ghom = {t: g for g, t in enumerate(hom_idx)}
    cocy = {p: table.class_basis_cocycles(p) for p in range(P)}
    cyc = {r: table.class_basis_cycles(r) for r in range(P)}

    def as_coh(p, coords):
        return {gcoh[(p, i)]: x for i, x in enumerate(coords) if x}

    def as_hom(r, coords):
        return {ghom[(r, i)]: x for i, x in enumerate(coords) if x}

    cupt, brt, capt, kap = {}, {}, {}, {}
    for gi, (p, i) in enumerate(coh_idx):
        for gj, (q, j) in enumerate(coh_idx):
            f, g = cocy[p][i], cocy[q][j]
            if p + q < P:
                cupt[(gi, gj)] = as_coh(p + q, table.class_of_cochain(cup(f, g, twisted=True)))
            if p + q - 1 < 0:
                brt[(gi, gj)] = {}
            elif p + q - 1 < P:
                brt[(gi, gj)] = as_coh(p + q - 1, table.class_of_cochain(gerstenhaber_bracket(f, g)))
    for gk, (r, k) in enumerate(hom_idx):
        z = cyc[r][k]
        for gi, (p, i) in enumerate(coh_idx):
            if p > r:
                capt[(gk, gi)] = {}
                continue
            capt[(gk, gi)] = as_hom(r - p, table.class_of_chain(cap(z, cocy[p][i], twisted=True)))
        if r + 1 < P:
            kap[gk] = as_hom(r + 1, table.class_of_chain(connes_boundary(z)))
    unit = as_coh(0, table.class_of_cochain(unit_cochain(A, M)))
    return TTCalculus(coh_deg, hom_deg, cupt, brt, capt, kap, unit, coh_labels=coh_lab, hom_labels=hom_lab,
                      complete=False, name=A.name, meta={"P": P, "source": "hochschild"})

