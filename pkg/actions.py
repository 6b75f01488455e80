#!/usr/bin/env python3
"""
actions.py - Courant algebras acting on T ⊕ T* over a chart.

An extended action is a bracket-preserving map ρ from a Courant algebra a
(a Leibniz algebra with a morphism π onto a Lie algebra g) into the sections
of T ⊕ T*, such that h = ker π acts by closed 1-forms. Structure constants
are Gaussian rationals; the sections carry RatFun coefficients.
"""

import logging
from typing import NamedTuple

from sympy.polys.domains import QQ_I

from courant import D_operator, courant_bracket, symplectic_structure
from errors import (
    InconsistentConnection,
    InvariantError,
    ModuleAxiomViolation,
    NotEquivariant,
    NotHamiltonian,
    NotSymplectic,
)
from forms import (
    Form,
    GeneralizedField,
    TwistForm,
    as_form,
    evaluate_covector,
    ext_d,
    interior,
    lie_derivative,
    pairing,
    wedge,
)
from ratfun import HALF, I_UNIT, ONE, ZERO, RatFun
from reports import Report
from split_linalg import EXACT, SplitSpace, Subspace, express, nullspace, solve

logger = logging.getLogger(__name__)

INTEGRABILITY_ASSUMPTION = "the g-action integrates to a group action (not checkable on a chart)"


def _vec(values, dim):
    out = [ZERO] * dim
    for k, c in values.items():
        out[k] = QQ_I.convert(c)
    return tuple(out)


def _combine(coeffs, items, zero):
    out = zero
    for c, item in zip(coeffs, items):
        if c:
            out = out + (item * c if isinstance(item, RatFun) else item.scale(c))
    return out


def _bilinear(table, x, y):
    out = [ZERO] * (len(table[0][0]) if table else 0)
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            for k, c in enumerate(table[i][j]):
                if c:
                    out[k] = out[k] + xi * yj * c
    return tuple(out)


# ── algebra data ───────────────────────────────────────────────────────────

class LieAlgebraData:
    """Structure constants [e_i, e_j] = Σ_k c[i][j][k] e_k; antisymmetry and Jacobi are checked."""

    __slots__ = ("dim", "c")

    def __init__(self, dim, c):
        self.dim = dim
        self.c = [[tuple(QQ_I.convert(x) for x in c[i][j]) for j in range(dim)] for i in range(dim)]
        for i in range(dim):
            for j in range(dim):
                if any(a + b for a, b in zip(self.c[i][j], self.c[j][i])):
                    raise InvariantError(f"structure constants are not antisymmetric at ({i}, {j})")
        basis = self.basis()
        for x in basis:
            for y in basis:
                for z in basis:
                    lhs = self.bracket(x, self.bracket(y, z))
                    rhs = [a + b for a, b in zip(self.bracket(self.bracket(x, y), z), self.bracket(y, self.bracket(x, z)))]
                    if any(a - b for a, b in zip(lhs, rhs)):
                        raise InvariantError("structure constants violate the Jacobi identity")

    @classmethod
    def from_pairs(cls, dim, pairs=None):
        """Build from {(i, j): {k: c}} with i < j; the rest follows by antisymmetry."""
        c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), values in (pairs or {}).items():
            v = _vec(values, dim)
            c[i][j] = list(v)
            c[j][i] = [-x for x in v]
        return cls(dim, c)

    @classmethod
    def abelian(cls, dim):
        return cls.from_pairs(dim)

    def basis(self):
        return [_vec({i: ONE}, self.dim) for i in range(self.dim)]

    def bracket(self, x, y):
        return _bilinear(self.c, x, y)

    def adjoint(self):
        """ad(e_i) as matrices: (ad e_i)[k][j] = c[i][j][k]."""
        return [[[self.c[i][j][k] for j in range(self.dim)] for k in range(self.dim)] for i in range(self.dim)]


class CourantAlgebraData:
    """
    A Leibniz algebra a with a bracket morphism π: a → g.

    pi is a dim_g × dim_a matrix, bracket[i][j] the coefficient vector of
    [a_i, a_j]. The Leibniz identity (c1) and the morphism property (c2) are
    checked at construction.
    """

    __slots__ = ("dim", "g", "pi", "table")

    def __init__(self, g, pi, bracket):
        self.g = g
        self.pi = [[QQ_I.convert(x) for x in row] for row in pi]
        self.dim = len(self.pi[0]) if self.pi else len(bracket)
        self.table = [[tuple(QQ_I.convert(x) for x in bracket[i][j]) for j in range(self.dim)]
                      for i in range(self.dim)]
        report = self.axioms()
        if not report.passed:
            raise InvariantError(f"Courant algebra axioms fail: {report.failures()}", payload=report)

    def basis(self):
        return [_vec({i: ONE}, self.dim) for i in range(self.dim)]

    def bracket(self, x, y):
        return _bilinear(self.table, x, y)

    def project(self, x):
        return tuple(sum((row[k] * x[k] for k in range(self.dim) if x[k]), ZERO) for row in self.pi)

    def axioms(self):
        report = Report(title="Courant algebra axioms")
        c1 = None
        c2 = None
        basis = self.basis()
        for x in basis:
            for y in basis:
                pxy = self.project(self.bracket(x, y))
                gxy = self.g.bracket(self.project(x), self.project(y))
                if c2 is None and any(a - b for a, b in zip(pxy, gxy)):
                    c2 = (x, y)
                for z in basis:
                    lhs = self.bracket(x, self.bracket(y, z))
                    rhs = [a + b for a, b in zip(self.bracket(self.bracket(x, y), z), self.bracket(y, self.bracket(x, z)))]
                    if c1 is None and any(a - b for a, b in zip(lhs, rhs)):
                        c1 = (x, y, z)
        report.record("c1", c1 is None, detail="" if c1 is None else f"fails at {c1}")
        report.record("c2", c2 is None, detail="" if c2 is None else f"fails at {c2}")
        return report

    def h_basis(self):
        """Basis of h = ker π as coefficient vectors in a."""
        return nullspace(self.pi, self.dim, EXACT)

    def lift(self, g_vector):
        """Some a with π(a) = g_vector."""
        x = solve(self.pi, list(g_vector), EXACT)
        if x is None:
            raise InvariantError("π is not surjective onto the requested element")
        return x

    def is_exact(self):
        """π surjective and h abelian."""
        if Subspace(self.dim, self.pi, EXACT).rank != self.g.dim:
            return False
        hs = self.h_basis()
        return all(not any(self.bracket(x, y)) for x in hs for y in hs)


def hemisemidirect(g, module):
    """
    g ⊕ h with [(g1, h1), (g2, h2)] = ([g1, g2], g1·h2).

    module[i] is the matrix of e_i acting on h; it must be a representation.
    """
    m = g.dim
    k = len(module[0]) if module else 0
    rep = [[[QQ_I.convert(x) for x in row] for row in M] for M in module]
    for i in range(m):
        for j in range(m):
            comm = [[sum((rep[i][r][s] * rep[j][s][t] - rep[j][r][s] * rep[i][s][t] for s in range(k)), ZERO)
                     for t in range(k)] for r in range(k)]
            target = [[sum((g.c[i][j][q] * rep[q][r][t] for q in range(m)), ZERO) for t in range(k)] for r in range(k)]
            if comm != target:
                raise ModuleAxiomViolation(f"[ρ(e{i}), ρ(e{j})] ≠ ρ([e{i}, e{j}])", payload=(i, j))

    dim = m + k
    table = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(m):
        for j in range(m):
            for q in range(m):
                table[i][j][q] = g.c[i][j][q]
        for j in range(k):
            for r in range(k):
                table[i][m + j][m + r] = rep[i][r][j]
    pi = [[ONE if c == r else ZERO for c in range(dim)] for r in range(m)]
    return CourantAlgebraData(g, pi, table)


# ── extended actions ───────────────────────────────────────────────────────

class ExtendedAction:
    """ρ: a → Γ(T ⊕ T*), one GeneralizedField per basis element of a."""

    __slots__ = ("algebra", "rho", "H")

    def __init__(self, algebra, rho, H=None):
        if len(rho) != algebra.dim:
            raise InvariantError(f"ρ needs {algebra.dim} sections, got {len(rho)}")
        self.algebra = algebra
        self.rho = list(rho)
        table = self.rho[0].table if self.rho else None
        self.H = H if isinstance(H, TwistForm) else TwistForm(H if H is not None else Form.zero(table))

    @property
    def table(self):
        return self.rho[0].table

    def rho_of(self, x):
        return _combine(x, self.rho, GeneralizedField.zero(self.table))

    def X(self, x):
        return self.rho_of(x).vector_part()

    def xi(self, x):
        return self.rho_of(x).cov

    def generator(self, i):
        """Vector field of the i-th basis element of g."""
        return self.X(self.algebra.lift(_vec({i: ONE}, self.algebra.g.dim)))


def check_extended_action(action):
    """
    Report on (i) ρ[a,b] = [ρa, ρb]_H, (ii) ρ(h) closed 1-forms,
    (iii) i_{X_a}H − dξ_a = 0 and (iv) ξ_{[a,b]} = L_{X_a}ξ_b.
    """
    alg = action.algebra
    H = action.H.H
    basis = alg.basis()
    report = Report(title="extended action")
    report.assumptions.append(INTEGRABILITY_ASSUMPTION)

    morphism, actex = None, None
    for x in basis:
        for y in basis:
            xy = alg.bracket(x, y)
            r = action.rho_of(xy) - courant_bracket(action.rho_of(x), action.rho_of(y), H)
            if morphism is None and r:
                morphism = r
            r = action.xi(xy) - lie_derivative(action.X(x).vec, action.xi(y))
            if actex is None and r:
                actex = r
    closed = []
    for h in alg.h_basis():
        rh = action.rho_of(h)
        closed += [rh.vector_part(), ext_d(rh.cov)]
    equi = [interior(action.X(x).vec, H) - ext_d(action.xi(x)) for x in basis]

    report.record("morphism", morphism, detail="ρ[a,b] = [ρa, ρb]_H on basis pairs")
    report.record("closed_nu", closed, detail="ρ(h) is a closed 1-form")
    report.record("invariant_splitting", equi, detail="i_{X_a}H − dξ_a = 0")
    report.record("equivariance", actex, detail="ξ_[a,b] = L_{X_a} ξ_b")
    return report


def symplectic_extension(omega, g, psi):
    """
    ρ(g, h) = X_g + i_{X_h} ω on the hemisemidirect product of g with its
    adjoint module, H = 0. psi lists the vector fields of the basis of g.
    """
    table = omega.table
    if not omega.is_homogeneous(2):
        raise NotSymplectic("ω is not a 2-form")
    if ext_d(omega):
        raise NotSymplectic("ω is not closed", payload=ext_d(omega))
    try:
        symplectic_structure(omega)
    except InvariantError:
        raise NotSymplectic("ω is degenerate") from None
    for i, X in enumerate(psi):
        r = lie_derivative(X.vec, omega)
        if r:
            raise NotSymplectic(f"L_X ω ≠ 0 for generator {i}", payload=r)
    algebra = hemisemidirect(g, g.adjoint())
    rho = [X.vector_part() for X in psi]
    rho += [GeneralizedField.covector(interior(X.vec, omega)) for X in psi]
    return ExtendedAction(algebra, rho, TwistForm.zero(table))


def moment_action(g, psi, mu):
    """(g, h) ↦ X_g + dμ_h on the hemisemidirect product of g with its adjoint module."""
    table = psi[0].table
    algebra = hemisemidirect(g, g.adjoint())
    rho = [X.vector_part() for X in psi]
    rho += [GeneralizedField.covector(ext_d(Form.scalar(table, m))) for m in mu]
    return ExtendedAction(algebra, rho, TwistForm.zero(table))


def _equivariance_residuals(action, f):
    """X_{g_i}(f_j) − Σ_k c_ij^k f_k over basis pairs of g."""
    g = action.algebra.g
    out = []
    for i in range(g.dim):
        X = action.generator(i)
        for j in range(g.dim):
            lhs = evaluate_covector(ext_d(Form.scalar(action.table, f[j])), X)
            rhs = RatFun.zero(action.table)
            for k, c in enumerate(g.c[i][j]):
                if c:
                    rhs = rhs + f[k] * RatFun.const(action.table, c)
            if lhs != rhs:
                out.append(((i, j), lhs - rhs))
    return out


def action_equivalence(action, f):
    """ρ'(a) = ρ(a) + D⟨f, π(a)⟩ for an equivariant f: M → g*."""
    alg = action.algebra
    if len(f) != alg.g.dim:
        raise InvariantError(f"f needs {alg.g.dim} components")
    bad = _equivariance_residuals(action, f)
    if bad:
        raise NotEquivariant(f"f is not equivariant at basis pair {bad[0][0]}", payload=bad[0][1])
    table = action.table
    rho = []
    for x, r in zip(alg.basis(), action.rho):
        shift = RatFun.zero(table)
        for k, c in enumerate(alg.project(x)):
            if c:
                shift = shift + f[k] * RatFun.const(table, c)
        rho.append(r + GeneralizedField.covector(ext_d(Form.scalar(table, shift))))
    return ExtendedAction(alg, rho, action.H)


# ── equivariant cohomology ─────────────────────────────────────────────────

class EquivariantForm:
    """Φ(a) = H + ξ_a, linear in a."""

    __slots__ = ("H", "xi")

    def __init__(self, H, xi):
        H = as_form(H)
        if H and not H.is_homogeneous(3):
            raise InvariantError("base of an equivariant 3-form must have degree 3")
        if any(x and not x.is_homogeneous(1) for x in xi):
            raise InvariantError("linear part of an equivariant 3-form must be 1-forms")
        self.H = H
        self.xi = list(xi)

    @classmethod
    def of_action(cls, action):
        return cls(action.H.H, [r.cov for r in action.rho])

    def at(self, x):
        return self.H + _combine(x, self.xi, Form.zero(self.H.table))


def cartan_d(phi, action, elements=None):
    """(d_G Φ)(a) = dΦ(a) − i_{X_a} Φ(a) for each requested a (default: the basis)."""
    elements = elements or action.algebra.basis()
    out = []
    for x in elements:
        value = phi.at(x)
        out.append(ext_d(value) - interior(action.X(x).vec, value))
    return out


def isotropy_form(action):
    """c(a, b) = ⟨ρ(a), ρ(b)⟩ on basis pairs."""
    return [[pairing(a, b) for b in action.rho] for a in action.rho]


def moment_check(action, mu):
    """dμ_h = ν(h) and μ_{[a,h]} = X_a(μ_h), for μ given on the basis of h."""
    alg = action.algebra
    hs = alg.h_basis()
    table = action.table
    if len(mu) != len(hs):
        raise InvariantError(f"μ needs {len(hs)} components, got {len(mu)}")
    report = Report(title="moment map")

    dmu = []
    for h, m in zip(hs, mu):
        rh = action.rho_of(h)
        dmu.append(rh - GeneralizedField.covector(ext_d(Form.scalar(table, m))))
    report.record("dmu", dmu, detail="dμ_h = ν(h)")

    def mu_of(h_vec):
        coeffs = express(hs, h_vec, EXACT)
        if coeffs is None:
            raise InvariantError("bracket [a, h] left h")
        return _combine(coeffs, mu, RatFun.zero(table))

    equi = []
    for x in alg.basis():
        X = action.X(x)
        for h, m in zip(hs, mu):
            lhs = mu_of(alg.bracket(x, h))
            rhs = evaluate_covector(ext_d(Form.scalar(table, m)), X)
            equi.append(lhs - rhs)
    report.record("equivariance", equi, detail="μ_[a,h] = X_a μ_h")
    return report


# ── distributions at a point ───────────────────────────────────────────────

class Distributions(NamedTuple):
    K: Subspace
    K_perp: Subspace
    Delta_s: Subspace
    Delta_b: Subspace


def field_at(v, point):
    """Components of v at an exact point in the coordinate basis (∂_v, dv)."""
    table = v.table
    n = table.coord_count
    for k in v.vec:
        if table.is_aux(k):
            raise InvariantError("sections with auxiliary components cannot be evaluated pointwise")
    tangent = [v.component(k).evaluate_exact(point) for k in range(n)]
    cotangent = [v.cov.coeff((k,)).evaluate_exact(point) for k in range(n)]
    return tuple(tangent + cotangent)


def distributions(action, point):
    """K, K^⊥, Δ_s = Ann(ρ(h)) and Δ_b = π(K + K^⊥) at one exact point."""
    n = action.table.coord_count
    space = SplitSpace.standard(n, EXACT)
    K = space.subspace([field_at(r, point) for r in action.rho])
    Kp = K.perp()
    nu = Subspace(n, [field_at(action.rho_of(h), point)[n:] for h in action.algebra.h_basis()], EXACT)
    return Distributions(K, Kp, nu.annihilator(), space.anchor(K.sum(Kp)))


def distribution_ranks(action, points):
    """Ranks of the four distributions per point, with a constancy check."""
    report = Report(title="distribution ranks")
    ranks = []
    for p in points:
        d = distributions(action, p)
        ranks.append({name: sub.rank for name, sub in d._asdict().items()})
    report.data["ranks"] = ranks
    report.record("constant_rank", all(r == ranks[0] for r in ranks))
    return report


# ── reduced Ševera class ───────────────────────────────────────────────────

class SeveraResult(NamedTuple):
    form: Form
    closed: bool


def severa_pushdown(h_basic, theta, F, xi, g=None, pairing_matrix=None):
    """
    h + ⟨F ∧ ξ⟩ on a trivialization chart.

    theta, F and xi are indexed by the basis of g; ⟨·,·⟩ contracts with
    pairing_matrix (identity by default). F must equal dθ + ½[θ ∧ θ].
    """
    table = as_form(h_basic).table
    m = len(theta)
    g = g or LieAlgebraData.abelian(m)
    P = pairing_matrix or [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]
    for k in range(m):
        expected = ext_d(theta[k])
        for i in range(m):
            for j in range(m):
                c = g.c[i][j][k]
                if c:
                    expected = expected + wedge(theta[i], theta[j]).scale(c * HALF)
        if expected != F[k]:
            raise InconsistentConnection(f"F[{k}] ≠ dθ + ½[θ∧θ]", payload=expected - F[k])
    out = as_form(h_basic)
    for i in range(m):
        for j in range(m):
            c = QQ_I.convert(P[i][j])
            if c:
                out = out + wedge(F[i], xi[j]).scale(c)
    return SeveraResult(out, not ext_d(out))


# ── Hamiltonian complexification ───────────────────────────────────────────

def hamiltonian_complexify(action, f_re, f_im, J):
    """
    For a trivially extended isotropic action with ρ(a) = D f_a, build the
    g ⊕ g action ρ'(g, h) = ρ(g) − d(Re f_g) + d(Im f_h); its moment map is Im f.
    """
    alg = action.algebra
    table = action.table
    if alg.dim != alg.g.dim or alg.h_basis():
        raise InvariantError("expected a trivially extended action (a = g)")
    for a, b in ((x, y) for x in action.rho for y in action.rho):
        if pairing(a, b):
            raise InvariantError("expected an isotropic action")
    for i, r in enumerate(action.rho):
        residual = r - D_operator(f_re[i], f_im[i], J)
        if residual:
            raise NotHamiltonian(f"ρ(a{i}) ≠ D f_a{i}", payload=residual)
    f = [a + b.scale(I_UNIT) for a, b in zip(f_re, f_im)]
    bad = _equivariance_residuals(action, f)
    if bad:
        raise NotEquivariant(f"f is not equivariant at basis pair {bad[0][0]}", payload=bad[0][1])

    algebra = hemisemidirect(alg.g, alg.g.adjoint())
    rho = [r - GeneralizedField.covector(ext_d(Form.scalar(table, re))) for r, re in zip(action.rho, f_re)]
    rho += [GeneralizedField.covector(ext_d(Form.scalar(table, im))) for im in f_im]
    return ExtendedAction(algebra, rho, action.H)

