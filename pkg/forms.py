#!/usr/bin/env python3
"""
forms.py - Exterior algebra on a single chart with RatFun coefficients.

A Form maps wedge monomials to coefficients. A monomial is a strictly
increasing tuple of variable indices of the chart's VarTable: index i stands
for the differential of variable i, so dz_k, dzb_k and du all share one
numbering. Generalized fields X + ξ pair a vector part (RatFun components
along ∂_v) with a degree-1 Form, and act on Forms by Clifford multiplication
(X + ξ)·φ = i_X φ + ξ∧φ.
"""

import logging
from math import factorial

from errors import InvariantError
from ratfun import HALF, RatFun, VarTable, gq

logger = logging.getLogger(__name__)


# ── monomial helpers ───────────────────────────────────────────────────────

def _sort_sign(seq):
    """Sign of the permutation sorting seq, and the sorted tuple; (0, None) on repeats."""
    items = list(seq)
    if len(set(items)) != len(items):
        return 0, None
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign, tuple(sorted(items))


def _merge(ma, mb):
    if set(ma) & set(mb):
        return 0, None
    inversions = sum(1 for x in ma for y in mb if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(ma + mb))


def _accumulate(terms, mono, coeff):
    if mono in terms:
        terms[mono] = terms[mono] + coeff
    else:
        terms[mono] = coeff


def generator_name(table, idx):
    return "d" + table.names[idx]


# ── Forms ──────────────────────────────────────────────────────────────────

class Form:
    """Finite sum of RatFun multiples of wedge monomials. Immutable."""

    __slots__ = ("table", "terms")
    __hash__ = None

    def __init__(self, table, terms=None):
        self.table = table
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # --- construction ---

    @classmethod
    def zero(cls, table):
        return cls(table)

    @classmethod
    def scalar(cls, table, value):
        if not isinstance(value, RatFun):
            value = RatFun.const(table, value)
        return cls(table, {(): value})

    @classmethod
    def dvar(cls, table, name):
        """The generator d(name), e.g. dz0, dzb2 or du."""
        return cls(table, {(table.index(name),): RatFun.one(table)})

    @classmethod
    def monomial(cls, table, names, coeff=None):
        """coeff · d(names[0]) ∧ d(names[1]) ∧ ...; repeats raise InvariantError."""
        idx = [table.index(n) for n in names]
        sign, mono = _sort_sign(idx)
        if not sign:
            raise InvariantError(f"repeated generator in monomial {list(names)}")
        coeff = RatFun.one(table) if coeff is None else coeff
        if not isinstance(coeff, RatFun):
            coeff = RatFun.const(table, coeff)
        return cls(table, {mono: coeff if sign > 0 else -coeff})

    @classmethod
    def volume(cls, table):
        """Coordinate volume monomial dz0…dz{n-1} dzb0…dzb{n-1}."""
        return cls(table, {tuple(range(table.coord_count)): RatFun.one(table)})

    # --- structure ---

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({len(m) for m in self.terms})

    def is_homogeneous(self, k):
        return all(len(m) == k for m in self.terms)

    def part(self, k):
        return Form(self.table, {m: c for m, c in self.terms.items() if len(m) == k})

    def coeff(self, mono):
        return self.terms.get(tuple(mono), RatFun.zero(self.table))

    def scalar_part(self):
        return self.coeff(())

    def map_coeffs(self, fn):
        return Form(self.table, {m: fn(c) for m, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (len(mc[0]), mc[0]))

    # --- linear structure ---

    def _check(self, other):
        if not isinstance(other, Form):
            raise TypeError(f"expected a Form, got {type(other).__name__}")
        if other.table != self.table:
            raise ValueError(f"mixed variable tables {self.table!r} and {other.table!r}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(terms, m, c)
        return Form(self.table, terms)

    def __neg__(self):
        return Form(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        """Multiply every coefficient by a RatFun or a constant."""
        if not isinstance(f, RatFun):
            f = RatFun.const(self.table, f)
        if not f:
            return Form.zero(self.table)
        return Form(self.table, {m: c * f for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if other.table != self.table:
            return False
        if set(self.terms) != set(other.terms):
            return not (self - other).terms
        return all(c == other.terms[m] for m, c in self.terms.items())

    # --- substitution / evaluation ---

    def conj(self):
        perm = self.table.conj_perm
        terms = {}
        for m, c in self.terms.items():
            sign, mono = _sort_sign(perm[i] for i in m)
            c = c.conj()
            _accumulate(terms, mono, c if sign > 0 else -c)
        return Form(self.table, terms)

    def pullback(self, mapping):
        """
        Pull back along var := value for each (var, value) in mapping.

        Coefficients are substituted and the generator of each mapped variable
        becomes d(value). Values must not mention the mapped variables.
        """
        table = self.table
        idx_map = {table.index(v): (val if isinstance(val, RatFun) else RatFun.const(table, val))
                   for v, val in mapping.items()}
        differentials = {i: ext_d(Form.scalar(table, val)) for i, val in idx_map.items()}
        out = Form.zero(table)
        for m, c in self.terms.items():
            for i, val in idx_map.items():
                c = c.subst(i, val)
            if not c:
                continue
            piece = Form.scalar(table, c)
            for j in m:
                gen = differentials.get(j)
                piece = wedge(piece, gen if gen is not None else Form(table, {(j,): RatFun.one(table)}))
                if not piece:
                    break
            out = out + piece
        return out

    def subst(self, var, value):
        """Substitute in coefficients only (generators untouched)."""
        return self.map_coeffs(lambda c: c.subst(var, value))

    def evaluate(self, z):
        return {m: c.evaluate(z) for m, c in self.terms.items()}

    def evaluate_exact(self, z):
        return {m: c.evaluate_exact(z) for m, c in self.terms.items()}

    # --- printing ---

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            gens = "".join(generator_name(self.table, i) for i in m)
            parts.append(f"({c}){gens}" if gens else f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Form({self})"


class TwistForm:
    """A closed 3-form H twisting the Courant bracket."""

    __slots__ = ("H",)

    def __init__(self, H, check=True):
        if not H.is_homogeneous(3):
            raise InvariantError(f"twisting form must have degree 3, got degrees {H.degrees()}")
        if check and ext_d(H):
            raise InvariantError("twisting form is not closed", payload=ext_d(H))
        self.H = H

    @classmethod
    def zero(cls, table):
        return cls(Form.zero(table))

    @property
    def table(self):
        return self.H.table


def as_form(H):
    return H.H if isinstance(H, TwistForm) else H


# ── Generalized fields ─────────────────────────────────────────────────────

class GeneralizedField:
    """Section X + ξ of T ⊕ T* with RatFun components."""

    __slots__ = ("table", "vec", "cov")
    __hash__ = None

    def __init__(self, table, vec=None, cov=None):
        self.table = table
        self.vec = {table.index(k): v for k, v in (vec or {}).items() if v}
        cov = Form.zero(table) if cov is None else cov
        if not cov.is_homogeneous(1):
            raise InvariantError(f"covector part must have degree 1, got degrees {cov.degrees()}")
        self.cov = cov

    @classmethod
    def zero(cls, table):
        return cls(table)

    @classmethod
    def vector(cls, table, components):
        """components: {variable name or index: RatFun or constant}."""
        vec = {}
        for k, v in components.items():
            vec[k] = v if isinstance(v, RatFun) else RatFun.const(table, v)
        return cls(table, vec)

    @classmethod
    def covector(cls, form):
        return cls(form.table, cov=form)

    def vector_part(self):
        return GeneralizedField(self.table, self.vec)

    def component(self, idx):
        return self.vec.get(self.table.index(idx), RatFun.zero(self.table))

    def __bool__(self):
        return bool(self.vec) or bool(self.cov)

    def __add__(self, other):
        vec = dict(self.vec)
        for k, v in other.vec.items():
            vec[k] = vec[k] + v if k in vec else v
        return GeneralizedField(self.table, vec, self.cov + other.cov)

    def __neg__(self):
        return GeneralizedField(self.table, {k: -v for k, v in self.vec.items()}, -self.cov)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if not isinstance(f, RatFun):
            f = RatFun.const(self.table, f)
        return GeneralizedField(self.table, {k: v * f for k, v in self.vec.items()}, self.cov.scale(f))

    def __rmul__(self, f):
        return self.scale(f)

    def __eq__(self, other):
        if not isinstance(other, GeneralizedField):
            return NotImplemented
        keys = set(self.vec) | set(other.vec)
        return all(self.component(k) == other.component(k) for k in keys) and self.cov == other.cov

    def conj(self):
        perm = self.table.conj_perm
        return GeneralizedField(self.table, {perm[k]: v.conj() for k, v in self.vec.items()}, self.cov.conj())

    def __str__(self):
        vec = " + ".join(f"({v})∂{self.table.names[k]}" for k, v in sorted(self.vec.items()))
        return f"[{vec or '0'}] + [{self.cov}]"

    def __repr__(self):
        return f"GeneralizedField({self})"


# ── exterior calculus ──────────────────────────────────────────────────────

def wedge(a, b):
    a._check(b)
    if not a.terms or not b.terms:
        return Form.zero(a.table)
    terms = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, mono = _merge(ma, mb)
            if not sign:
                continue
            c = ca * cb
            _accumulate(terms, mono, c if sign > 0 else -c)
    return Form(a.table, terms)


def ext_d(a):
    """d = Σ_v dv ∧ ∂_v over every chart variable, auxiliaries included."""
    table = a.table
    terms = {}
    for m, c in a.terms.items():
        for v in range(table.nvars):
            if v in m or not c.depends_on(v):
                continue
            dc = c.diff(v)
            if not dc:
                continue
            position = sum(1 for j in m if j < v)
            mono = tuple(sorted(m + (v,)))
            _accumulate(terms, mono, -dc if position % 2 else dc)
    return Form(table, terms)


def _vector_components(X):
    if isinstance(X, GeneralizedField):
        return X.vec
    return X


def interior(X, a):
    """i_X a for a purely vector field X (a graded derivation of degree −1)."""
    if isinstance(X, GeneralizedField) and X.cov:
        raise InvariantError("interior product needs a purely vector field")
    vec = _vector_components(X)
    table = a.table
    terms = {}
    for m, c in a.terms.items():
        for pos, j in enumerate(m):
            x = vec.get(j)
            if x is None:
                continue
            t = c * x
            _accumulate(terms, m[:pos] + m[pos + 1:], -t if pos % 2 else t)
    return Form(table, terms)


def lie_derivative(X, a):
    """Cartan's formula L_X = d i_X + i_X d."""
    return ext_d(interior(X, a)) + interior(X, ext_d(a))


def lie_bracket(X, Y):
    """Vector part of [X, Y]: Σ_w X^w ∂_w Y^v − Y^w ∂_w X^v."""
    table = X.table
    vec = {}
    for v in set(X.vec) | set(Y.vec):
        total = RatFun.zero(table)
        for w, xw in X.vec.items():
            yv = Y.vec.get(v)
            if yv is not None and yv.depends_on(w):
                total = total + xw * yv.diff(w)
        for w, yw in Y.vec.items():
            xv = X.vec.get(v)
            if xv is not None and xv.depends_on(w):
                total = total - yw * xv.diff(w)
        if total:
            vec[v] = total
    return GeneralizedField(table, vec)


def evaluate_covector(xi, X):
    """ξ(X) as a RatFun, for a 1-form ξ and the vector part of X."""
    return interior(X.vec if isinstance(X, GeneralizedField) else X, xi).scalar_part()


def pairing(v, w):
    """⟨X+ξ, Y+η⟩ = ½(η(X) + ξ(Y))."""
    return (evaluate_covector(w.cov, v) + evaluate_covector(v.cov, w)) * RatFun.const(v.table, HALF)


def clifford(v, phi):
    """(X + ξ)·φ = i_X φ + ξ∧φ."""
    return interior(v.vec, phi) + wedge(v.cov, phi)


def bivector_action(a, b, phi):
    """Spin action of a∧b on φ: ½(a·(b·φ) − b·(a·φ))."""
    return (clifford(a, clifford(b, phi)) - clifford(b, clifford(a, phi))).scale(HALF)


def b_transform(B, phi):
    """e^B ∧ φ = Σ_k B^k/k! ∧ φ."""
    if not B.is_homogeneous(2):
        raise InvariantError(f"B-field must be a 2-form, got degrees {B.degrees()}")
    out = phi
    power = phi
    k = 1
    while True:
        power = wedge(B, power)
        if not power:
            break
        out = out + power.scale(gq((1, factorial(k))))
        k += 1
    return out


def b_transform_field(B, v):
    """e^B(X + ξ) = X + ξ + i_X B."""
    return GeneralizedField(v.table, v.vec, v.cov + interior(v.vec, B))


def exp_form(a):
    """exp of an even form with nilpotent positive-degree part and zero scalar part."""
    if a.scalar_part():
        raise InvariantError("exp_form expects a form without scalar part")
    out = Form.scalar(a.table, 1)
    power = Form.scalar(a.table, 1)
    k = 1
    while True:
        power = wedge(a, power)
        if not power:
            break
        out = out + power.scale(gq((1, factorial(k))))
        k += 1
    return out


def mukai_sigma(a):
    """σ(a) = (−1)^{k(k−1)/2} a on k-forms."""
    return Form(a.table, {m: (-c if (len(m) * (len(m) - 1) // 2) % 2 else c) for m, c in a.terms.items()})


def mukai(phi, psi, volume=None):
    """
    (φ ∧ σ(ψ))_top, where top is the coordinate degree of the chart, or the
    degree of the given volume monomial on an affine slice of it.
    """
    phi._check(psi)
    table = phi.table
    top = table.coord_count if volume is None else len(volume)
    sigma = mukai_sigma(psi)
    terms = {}
    for ma, ca in phi.terms.items():
        for mb, cb in sigma.terms.items():
            if len(ma) + len(mb) != top:
                continue
            sign, mono = _merge(ma, mb)
            if not sign:
                continue
            if any(table.is_aux(i) for i in mono):
                raise InvariantError("Mukai pairing met an auxiliary differential in a top-degree term")
            c = ca * cb
            _accumulate(terms, mono, c if sign > 0 else -c)
    return Form(table, terms)


def top_coefficient(form, volume=None):
    """Coefficient of the volume monomial (zero if absent)."""
    if volume is None:
        volume = tuple(range(form.table.coord_count))
    return form.coeff(volume)


def real_chart(n, aux=()):
    """Variable table of a real chart with coordinates z0..z{n-1}."""
    return VarTable(n, aux=aux, real=True)


def coordinate_field(table, name):
    return GeneralizedField.vector(table, {name: 1})


def half(table):
    return RatFun.const(table, HALF)
