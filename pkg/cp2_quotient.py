#!/usr/bin/env python3
"""
cp2_quotient.py - Generalized Kähler structures on ℂP² as circle quotients of ℂ³.

The deformed complex structure φ = (1 + ε)·dz0dz1dz2 on ℂ³ is contracted with
the generator ∂θ of the diagonal circle action, rescaled to a homogeneous
form and corrected by a multiple of du so that it descends to ℂP². Here u
stands for R² = Σ z_k zb_k and stays an independent variable of the chart
until a substitution removes it:

    build_example → interior_theta → projectivize → affine_chart → typemap / gk_assemble

Two deformations are built in: the triple line (type change along z0 = 0)
and the triangle (type change along z0³ + z1³ + z2³ − 3 z0 z1 z2 = 0).
"""

import asyncio
import logging
import os
from enum import Enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import pandas as pd
from dotenv import load_dotenv
from sympy.polys.domains import QQ, QQ_I
from tqdm import tqdm

from errors import (
    ChartDegenerate,
    DegenerateLeadingTerm,
    DivisionByZero,
    InvalidStructure,
    InvariantError,
    PointOnLocus,
    PoleAtPoint,
)
from forms import (
    Form,
    GeneralizedField,
    bivector_action,
    exp_form,
    ext_d,
    interior,
    lie_derivative,
    mukai,
    top_coefficient,
    wedge,
)
from ratfun import HALF, I_UNIT, ONE, RatFun, VarTable, gq, to_complex
from reports import Report
from split_linalg import (
    EXACT,
    FLOAT,
    annihilator_of_spinor,
    bihermitian_blocks,
    gcs_from_spinor,
    gcs_type,
    gk_check,
    mat_sub,
    matrix_text,
    real_imag,
    solve,
    spinor_two_form,
)

load_dotenv()

logger = logging.getLogger(__name__)

# ── CONSTANTS ──────────────────────────────────────────────────────────────
NUM_THREADS = int(os.getenv("GENRED_NUM_THREADS", str(os.cpu_count() or 4)))

TYPEMAP_COLUMNS = ["re_z1", "im_z1", "re_z2", "im_z2", "type", "mukai_abs", "flag"]

# direction of the line used to rescale a spinor that vanishes at a point
APPROACH_DIRECTION = (gq((3, 7), (1, 5)), gq((-2, 9), (5, 11)))


class Example(str, Enum):
    TRIPLE_LINE = "triple-line"
    TRIANGLE = "triangle"
    UNDEFORMED = "undeformed"


class Flag(str, Enum):
    OK = "ok"
    POLE = "pole"
    LOCUS = "locus"


# ── circle action ──────────────────────────────────────────────────────────

class CircleData:
    """
    Vector fields of the diagonal S¹ action on ℂⁿ.

    e = Σ z_k∂z_k + u∂u and ē = Σ zb_k∂zb_k + u∂u are the holomorphic and
    antiholomorphic Euler fields (u has bidegree (1, 1)), ∂θ = i(e − ē).
    """

    __slots__ = ("table", "u", "e", "ebar", "theta")

    def __init__(self, n=3):
        table = VarTable(n)
        self.table = table
        self.u = table.aux_index("u")
        var = lambda k: RatFun.var(table, k)
        e = {k: var(k) for k in range(n)}
        ebar = {table.antiholo(k): var(table.antiholo(k)) for k in range(n)}
        e[self.u] = var(self.u)
        ebar[self.u] = var(self.u)
        theta = {k: var(k).scale(I_UNIT) for k in range(n)}
        theta.update({table.antiholo(k): var(table.antiholo(k)).scale(-I_UNIT) for k in range(n)})
        self.e = GeneralizedField(table, e)
        self.ebar = GeneralizedField(table, ebar)
        self.theta = GeneralizedField(table, theta)

    @property
    def n(self):
        return self.table.n

    @property
    def radial(self):
        return self.e + self.ebar

    @property
    def r_squared(self):
        """Σ z_k zb_k as a polynomial."""
        table = self.table
        total = RatFun.zero(table)
        for k in range(table.n):
            total = total + RatFun.var(table, k) * RatFun.var(table, table.antiholo(k))
        return total

    def du_over_2u(self):
        u = RatFun.var(self.table, self.u)
        return Form.dvar(self.table, self.u).scale(u.inverse().scale(HALF))

    def identities(self):
        report = Report(title="circle action identities")
        report.record("theta = i(e - ebar)", self.theta - (self.e - self.ebar).scale(I_UNIT))
        report.record("i_(e+ebar) du/2u = 1",
                      interior(self.radial, self.du_over_2u()) - Form.scalar(self.table, 1))
        return report


# ── spinor lines ───────────────────────────────────────────────────────────

class SpinorLine:
    """A nonzero form standing for the line it spans; comparisons are projective."""

    __slots__ = ("rep", "tag")
    __hash__ = None

    def __init__(self, rep, tag=""):
        if not rep:
            raise InvariantError("a spinor line needs a nonzero representative")
        self.rep = rep
        self.tag = tag

    @property
    def table(self):
        return self.rep.table

    def leading(self):
        """Lowest-degree part of the representative."""
        return self.rep.part(self.rep.degrees()[0])

    def ratio_to(self, other):
        """f with self = f · other, or None when the lines differ."""
        if set(self.rep.terms) != set(other.rep.terms):
            return None
        mono = next(m for m, _ in self.rep.sorted_terms())
        theirs = other.rep.coeff(mono)
        if not theirs:
            return None
        f = self.rep.coeff(mono) / theirs
        return f if self.rep == other.rep.scale(f) else None

    def same_line(self, other):
        return self.ratio_to(other) is not None

    def rescale(self, f, tag=None):
        return SpinorLine(self.rep.scale(f), self.tag if tag is None else tag)

    def __eq__(self, other):
        if not isinstance(other, SpinorLine):
            return NotImplemented
        return self.same_line(other)

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"SpinorLine[{self.tag}]({self.rep})"


# ── the deformed structures on ℂ³ ──────────────────────────────────────────

def _mixed(table, k, sign):
    """∂z_k + sign·½ dzb_k."""
    cov = Form.dvar(table, table.antiholo(k)).scale(HALF if sign > 0 else -HALF)
    return GeneralizedField.vector(table, {k: 1}) + GeneralizedField.covector(cov)


def _deformation(table, which):
    """(a, b, f) with ε = f · a∧b."""
    z = [RatFun.var(table, k) for k in range(table.n)]
    if which == Example.TRIPLE_LINE:
        return _mixed(table, 1, 1), _mixed(table, 2, -1), (z[0] ** 2).scale(HALF)
    a = (_mixed(table, 1, 1).scale(z[0]) + _mixed(table, 2, 1).scale(z[1])
         + _mixed(table, 0, 1).scale(z[2]))
    b = (_mixed(table, 2, -1).scale(z[0]) + _mixed(table, 0, -1).scale(z[1])
         + _mixed(table, 1, -1).scale(z[2]))
    return a, b, RatFun.const(table, HALF)


def holomorphic_volume(table):
    return Form.monomial(table, [f"z{k}" for k in range(table.n)])


def build_example(which, circle=None):
    """φ = (1 + ε)·dz0dz1dz2 on ℂ³."""
    which = Example(which)
    circle = circle or CircleData(3)
    table = circle.table
    omega = holomorphic_volume(table)
    if which == Example.UNDEFORMED:
        return SpinorLine(omega, which.value)
    a, b, f = _deformation(table, which)
    phi = omega + bivector_action(a, b, omega).scale(f)
    logger.info("built %s spinor with %d terms", which.value, len(phi.terms))
    return SpinorLine(phi, which.value)


def interior_theta(line, circle):
    """i_∂θ φ; the leading factor must survive the contraction."""
    contracted_leading = interior(circle.theta, line.leading())
    if not contracted_leading:
        raise DegenerateLeadingTerm("i_∂θ kills the leading factor", payload=line.leading())
    return SpinorLine(interior(circle.theta, line.rep), "interior_theta")


def leading_scalar(line):
    c = line.rep.scalar_part()
    if not c:
        raise DegenerateLeadingTerm("spinor has no invertible scalar part", payload=line.leading())
    return c


def normal_form(line):
    """(c, β) with φ = c·exp(β) when the scalar part c is invertible."""
    c = leading_scalar(line)
    return c, line.rep.part(2).scale(c.inverse())


def normal_form_residual(line):
    c, beta = normal_form(line)
    return line.rep - exp_form(beta).scale(c)


# ── projectivization ───────────────────────────────────────────────────────

def _exp_bidegree(table, exps):
    n = table.n
    p = sum(exps[:n])
    q = sum(exps[n:2 * n])
    w = sum(exps[2 * n:])
    return p + w, q + w


def _mono_bidegree(table, mono):
    n = table.n
    p = sum(1 for i in mono if i < n or table.is_aux(i))
    q = sum(1 for i in mono if n <= i < 2 * n or table.is_aux(i))
    return p, q


def _poly_bidegree(table, f):
    degrees = {_exp_bidegree(table, exps) for exps in f.monoms()}
    if len(degrees) != 1:
        raise InvariantError(f"denominator factor {f} is not bihomogeneous")
    return degrees.pop()


def homogenize(form, circle):
    """Multiply each term by the power of u that brings it to bidegree (0, 0)."""
    table = form.table
    ring = table.ring
    u = RatFun.var(table, circle.u)
    terms = {}
    for mono, c in form.terms.items():
        dp, dq = _mono_bidegree(table, mono)
        for f, e in c.den:
            fp, fq = _poly_bidegree(table, f)
            dp, dq = dp - e * fp, dq - e * fq
        by_weight = {}
        for exps, coeff in c.num.terms():
            p, q = _exp_bidegree(table, exps)
            if p + dp != q + dq:
                raise InvariantError(f"term of bidegree ({p + dp},{q + dq}) cannot be balanced by u")
            by_weight.setdefault(p + dp, {})[exps] = coeff
        total = RatFun.zero(table)
        for w, poly in by_weight.items():
            total = total + RatFun.build(table, ring.from_dict(poly), c.den) * u ** (-w)
        terms[mono] = total
    return Form(table, terms)


def projectivize(line, circle):
    """
    φ_B = φ̃ − (du/2u) ∧ i_{e+ē} φ̃ where φ̃ is the line divided by its scalar
    part and made homogeneous with powers of u.
    """
    c = leading_scalar(line)
    tilde = homogenize(line.rep.scale(c.inverse()), circle)
    correction = wedge(circle.du_over_2u(), interior(circle.radial, tilde))
    return SpinorLine(tilde - correction, "projective")


def eliminate_u(alpha, circle):
    """Pull back along u := Σ z zb, so du becomes Σ (zb dz + z dzb)."""
    return alpha.pullback({circle.u: circle.r_squared})


def projectivity_check(line, circle):
    """i_e, i_ē, L_e and L_ē kill the form; closed once u is eliminated."""
    alpha = line.rep
    report = Report(title=f"projectivity of {line.tag or 'spinor'}")
    report.record("i_e", interior(circle.e, alpha))
    report.record("i_ebar", interior(circle.ebar, alpha))
    report.record("L_e", lie_derivative(circle.e, alpha))
    report.record("L_ebar", lie_derivative(circle.ebar, alpha))
    report.record("closed", ext_d(eliminate_u(alpha, circle)))
    return report


def fubini_study_spinor(circle):
    """exp(−½(u Σ dz dzb − (Σ zb dz)∧(Σ z dzb))/u²)."""
    table = circle.table
    u = RatFun.var(table, circle.u)
    s = Form.zero(table)
    holo = Form.zero(table)
    anti = Form.zero(table)
    for k in range(table.n):
        kb = table.antiholo(k)
        s = s + wedge(Form.dvar(table, k), Form.dvar(table, kb))
        holo = holo + Form.dvar(table, k).scale(RatFun.var(table, kb))
        anti = anti + Form.dvar(table, kb).scale(RatFun.var(table, k))
    beta = (s.scale(u) - wedge(holo, anti)).scale((u ** -2).scale(-HALF))
    return SpinorLine(exp_form(beta), "fubini-study")


# ── affine charts ──────────────────────────────────────────────────────────

def chart_coords(table, chart):
    return [j for j in range(table.n) if j != chart]


def chart_volume(table, chart):
    coords = chart_coords(table, chart)
    return tuple(coords + [table.antiholo(j) for j in coords])


def full_point(point, chart, one=ONE):
    """Insert z_chart = 1 into the affine coordinates."""
    point = list(point)
    return tuple(point[:chart] + [one] + point[chart:])


def affine_chart(line, chart=0):
    """z_k := 1, zb_k := 1 and u := 1 + r²; the chart differentials drop out."""
    rep = line.rep if isinstance(line, SpinorLine) else line
    table = rep.table
    r2 = RatFun.zero(table)
    for j in chart_coords(table, chart):
        r2 = r2 + RatFun.var(table, j) * RatFun.var(table, table.antiholo(j))
    mapping = {chart: 1, table.antiholo(chart): 1}
    if table.aux:
        mapping[table.aux_index("u")] = r2 + 1
    try:
        out = rep.pullback(mapping)
    except DivisionByZero as exc:
        raise ChartDegenerate(f"chart z{chart} = 1 meets a denominator identically", payload=chart) from exc
    if not out:
        raise ChartDegenerate(f"spinor vanishes identically on the chart z{chart} = 1", payload=chart)
    return out


@lru_cache(maxsize=None)
def example_pipeline(which):
    """(φ, i_∂θ φ, φ_B) for one example, built once."""
    which = Example(which)
    circle = CircleData(3)
    phi = build_example(which, circle)
    contracted = interior_theta(phi, circle)
    projective = projectivize(contracted, circle)
    return circle, phi, contracted, projective


@lru_cache(maxsize=None)
def chart_spinor(which, chart=0):
    return affine_chart(example_pipeline(which)[3], chart)


@lru_cache(maxsize=None)
def fubini_study_chart(chart=0):
    return affine_chart(fubini_study_spinor(CircleData(3)), chart)


# ── type maps ──────────────────────────────────────────────────────────────

def _total_degree(form):
    return max((sum(m) for c in form.terms.values() for m in c.num.monoms()), default=0)


def _clear_denominators(alpha):
    """D·α with D the product of every denominator factor at its largest exponent."""
    table = alpha.table
    acc = {}
    for c in alpha.terms.values():
        for f, e in c.den:
            acc[f] = max(acc.get(f, 0), e)
    d = RatFun.one(table)
    for f, e in acc.items():
        d = d * RatFun(table, f ** e)
    return alpha.scale(d)


class ChartSpinor:
    """A chart form prepared for pointwise evaluation."""

    def __init__(self, alpha, chart=0):
        table = alpha.table
        self.alpha = alpha
        self.chart = chart
        self.coords = chart_coords(table, chart)
        self.volume = chart_volume(table, chart)
        self.psi = _clear_denominators(alpha)
        self.degree = _total_degree(self.psi)
        self.mukai_alpha = top_coefficient(mukai(alpha, alpha.conj(), self.volume), self.volume)
        self.mukai_psi = top_coefficient(mukai(self.psi, self.psi.conj(), self.volume), self.volume)

    @property
    def table(self):
        return self.alpha.table


def _evaluate(obj, z, field):
    return obj.evaluate_exact(z) if field is EXACT else obj.evaluate(z)


def _nonzero(values, field):
    return {m: v for m, v in values.items() if not field.is_zero(field.convert(v))}


def _limit_along_line(spinor, z, field):
    """Lowest-order coefficient of ψ(p + t·d) in t, along a fixed line through the point."""
    deg = spinor.degree
    direction = [field.convert(x) for x in full_point(APPROACH_DIRECTION[:spinor.table.n - 1], spinor.chart)]
    direction[spinor.chart] = field.zero
    ts = [QQ(2 * j - deg, 2 * (deg + 1)) for j in range(deg + 1)]
    samples = []
    for t in ts:
        tt = field.convert(QQ_I(t, 0))
        samples.append(_evaluate(spinor.psi, [x + tt * d for x, d in zip(z, direction)], field))
    monos = sorted({m for s in samples for m in s}, key=lambda m: (len(m), m))
    coeffs = {}
    if field is EXACT:
        vander = [[QQ_I(t ** j, 0) for j in range(deg + 1)] for t in ts]
        for m in monos:
            coeffs[m] = solve(vander, [s.get(m, field.zero) for s in samples], field)
    else:
        tf = np.array([float(t) for t in ts])
        for m in monos:
            y = np.array([complex(s.get(m, 0j)) for s in samples])
            fit = np.polyfit(tf, y.real, deg) + 1j * np.polyfit(tf, y.imag, deg)
            coeffs[m] = tuple(complex(c) for c in fit[::-1])
    for order in range(deg + 1):
        limit = {m: c[order] for m, c in coeffs.items() if not field.is_zero(field.convert(c[order]))}
        if limit:
            return limit
    return {}


def _point_type(values, spinor, field):
    L = annihilator_of_spinor(values, spinor.table, spinor.coords, field)
    return gcs_type(L, L.space)


def typemap_point(spinor, point, field=EXACT):
    """(type, |Mukai|, flag) of the chart spinor at one affine point."""
    z = full_point([field.convert(x) for x in point], spinor.chart, field.one)
    try:
        values = _evaluate(spinor.alpha, z, field)
        magnitude = abs(to_complex(QQ_I.convert(_evaluate(spinor.mukai_alpha, z, field)))
                        if field is EXACT else _evaluate(spinor.mukai_alpha, z, field))
        return _point_type(_nonzero(values, field), spinor, field), magnitude, Flag.OK
    except PoleAtPoint:
        pass
    values = _nonzero(_evaluate(spinor.psi, z, field), field)
    if not values:
        values = _limit_along_line(spinor, z, field)
    mval = _evaluate(spinor.mukai_psi, z, field)
    magnitude = abs(to_complex(mval) if field is EXACT else mval)
    if not values:
        return None, magnitude, Flag.POLE
    kind = _point_type(values, spinor, field)
    return kind, magnitude, (Flag.LOCUS if kind > 0 else Flag.POLE)


def _row(point, result):
    kind, magnitude, flag = result
    coords = []
    for x in point:
        c = to_complex(QQ_I.convert(x)) if isinstance(x, QQ_I.dtype) else complex(x)
        coords += [c.real, c.imag]
    return coords + [kind, magnitude, flag.value]


async def _typemap_async(spinor, points, field):
    semaphore = asyncio.Semaphore(NUM_THREADS)
    progress = tqdm(total=len(points), desc="typemap", leave=False)

    async def worker(point):
        async with semaphore:
            result = await asyncio.to_thread(typemap_point, spinor, point, field)
        progress.update(1)
        return result

    try:
        return await asyncio.gather(*(worker(p) for p in points))
    finally:
        progress.close()


def typemap(alpha, points, chart=0, field=EXACT):
    """Type, Mukai magnitude and flag at each affine point, in grid order."""
    spinor = alpha if isinstance(alpha, ChartSpinor) else ChartSpinor(alpha, chart)
    points = list(points)
    results = asyncio.run(_typemap_async(spinor, points, field)) if points else []
    rows = [_row(p, r) for p, r in zip(points, results)]
    frame = pd.DataFrame(rows, columns=TYPEMAP_COLUMNS)
    frame["type"] = frame["type"].astype("Int64")
    logger.info("typemap: %d points, flags %s", len(frame), frame["flag"].value_counts().to_dict())
    return frame


def grid_points(size):
    """size × size real points with exact coordinates in [−1, 1]."""
    if size <= 0:
        return []
    if size == 1:
        return [(QQ_I(0, 0), QQ_I(0, 0))]
    ticks = [QQ_I(QQ(2 * k - (size - 1), size - 1), 0) for k in range(size)]
    return [(a, b) for a in ticks for b in ticks]


def lambda_point():
    """(λ, λ²) with λ = e^{2πi/3}, in floats."""
    lam = complex(-0.5, np.sqrt(3) / 2)
    return (lam, lam * lam)


# ── generalized Kähler assembly ────────────────────────────────────────────

def gk_assemble(which, point, chart=0):
    """J_A from φ_A and J_B from φ_B at an exact point; commutation, positivity, g and b."""
    which = Example(which)
    alpha_b = chart_spinor(which, chart)
    alpha_a = fubini_study_chart(chart)
    table = alpha_b.table
    coords = chart_coords(table, chart)
    z = full_point([QQ_I.convert(x) for x in point], chart)
    label = "(" + ", ".join(EXACT.text(QQ_I.convert(x)) for x in point) + ")"
    try:
        vb = alpha_b.evaluate_exact(z)
        va = alpha_a.evaluate_exact(z)
    except PoleAtPoint as exc:
        raise PointOnLocus(f"{which.value}: φ_B has a pole at {label}", payload=label) from exc
    try:
        ja = gcs_from_spinor(va, table, coords)
        jb = gcs_from_spinor(vb, table, coords)
    except InvalidStructure as exc:
        raise PointOnLocus(f"{which.value}: L ∩ L̄ ≠ 0 at {label}", payload=label) from exc

    info = gk_check(ja, jb)
    b_a, omega_a = real_imag(spinor_two_form(va, table, coords))
    b_b, omega_b = real_imag(spinor_two_form(vb, table, coords))
    report = Report(title=f"generalized Kähler structure of {which.value} at {label}")
    report.record("commute", info.commute)
    report.record("positive", info.positive)
    report.data.update(point=label, chart=chart)
    try:
        blocks = bihermitian_blocks(ja, jb, omega_a, omega_b, mat_sub(b_b, b_a))
    except InvalidStructure as exc:
        report.record("bihermitian", False, detail=str(exc))
        return report
    if blocks.cross_check is not None:
        report.record("bihermitian_cross_check", blocks.cross_check, detail=blocks.note)
    report.data.update(g=matrix_text(blocks.g), b=matrix_text(blocks.b), note=blocks.note)
    logger.debug("gk_assemble %s at %s: %s", which.value, label, report.failures() or "pass")
    return report


def sample_points(seed=0):
    """Endless stream of pseudo-random Gaussian rational points with parts in [−1, 1]."""
    rng = np.random.default_rng(seed)
    while True:
        parts = [QQ(int(p), 4) for p in rng.integers(-4, 5, size=4)]
        yield (QQ_I(parts[0], parts[1]), QQ_I(parts[2], parts[3]))


def gk_samples(which, count, seed=0, chart=0):
    """gk_assemble reports at the first count sampled points off the locus."""
    reports = []
    progress = tqdm(total=count, desc="gk", leave=False)
    for point in sample_points(seed):
        if len(reports) == count:
            break
        try:
            reports.append(gk_assemble(which, point, chart))
        except PointOnLocus as exc:
            logger.debug("skipping sample: %s", exc)
            continue
        progress.update(1)
    progress.close()
    return reports


# ── end-to-end runs ────────────────────────────────────────────────────────

class Reference(NamedTuple):
    leading: str
    mukai: str
    locus_chart: int
    locus_points: tuple
    locus_floats: tuple


REFERENCES = {
    Example.TRIPLE_LINE: Reference(
        leading="-1/2i*z0^3",
        mukai="z0^2*zb0^2/4-1",
        locus_chart=1,
        locus_points=((0, 0), (0, 1), (0, gq((1, 2), (1, 3)))),
        locus_floats=(),
    ),
    Example.TRIANGLE: Reference(
        leading="-1/2i*(z0^3+z1^3+z2^3-3*z0*z1*z2)",
        mukai="(z0*zb0+z1*zb1+z2*zb2)^2/4-1",
        locus_chart=0,
        locus_points=((1, 1),),
        locus_floats=(lambda_point(),),
    ),
}

PIPELINE_EXAMPLES = tuple(REFERENCES)
CHECKS = ("build", "mukai", "contract", "projectivity", "chart", "typemap", "gk")


def triangle_dphi(table):
    """−½ (Σ z dzb) ∧ dz0dz1dz2."""
    one_form = Form.zero(table)
    for k in range(table.n):
        one_form = one_form + Form.dvar(table, table.antiholo(k)).scale(RatFun.var(table, k))
    return wedge(one_form, holomorphic_volume(table)).scale(-HALF)


def run_pipeline(which, checks=CHECKS, grid=11, chart=0, seed=0, samples=20):
    """
    build → contract → projectivize → affine → closedness → mukai → typemap → gk,
    returning the report and the typemap frame (None when typemap is skipped).
    """
    which = Example(which)
    if which not in REFERENCES:
        raise InvariantError(f"{which.value} has no quotient pipeline; choose from {[e.value for e in PIPELINE_EXAMPLES]}")
    if checks is None or checks == "all":
        checks = CHECKS
    elif isinstance(checks, str):
        checks = (checks,)
    ref = REFERENCES[which]
    circle, phi, contracted, projective = example_pipeline(which)
    table = circle.table
    report = Report(title=f"ℂP² quotient: {which.value}")
    report.data["example"] = which.value
    report.merge(circle.identities())

    if "build" in checks:
        expected = triangle_dphi(table) if which == Example.TRIANGLE else Form.zero(table)
        report.record("dphi", ext_d(phi.rep) - expected)
    if "mukai" in checks:
        value = top_coefficient(mukai(phi.rep, phi.rep.conj()))
        report.record("mukai", value - RatFun.parse(table, ref.mukai), detail=ref.mukai)
    if "contract" in checks:
        report.record("leading_scalar", leading_scalar(contracted) - RatFun.parse(table, ref.leading),
                      detail=ref.leading)
        report.record("normal_form", normal_form_residual(contracted))
        report.record("theta_twice", interior(circle.theta, contracted.rep))
    if "projectivity" in checks:
        report.merge(projectivity_check(projective, circle))
    if "chart" in checks:
        alpha = chart_spinor(which, chart)
        report.record("chart_closed", ext_d(alpha))
        report.data["chart_spinor"] = str(alpha)

    frame = None
    if "typemap" in checks:
        alpha = chart_spinor(which, chart)
        frame = typemap(ChartSpinor(alpha, chart), grid_points(grid), chart)
        off = frame[frame["flag"] == Flag.OK.value]
        report.record("typemap_off_locus", bool((off["type"] == 0).all()),
                      detail=f"{len(off)} off-locus points")
        locus = ChartSpinor(chart_spinor(which, ref.locus_chart), ref.locus_chart)
        exact = typemap(locus, [tuple(QQ_I.convert(x) for x in p) for p in ref.locus_points],
                        ref.locus_chart)
        floats = typemap(locus, list(ref.locus_floats), ref.locus_chart, FLOAT)
        types = list(exact["type"]) + list(floats["type"])
        report.record("typemap_locus", all(t == 2 for t in types), detail=f"types {types}")
    if "gk" in checks:
        origin = gk_assemble(which, (QQ_I(0, 0), QQ_I(0, 0)), chart)
        report.merge(origin, prefix="gk_origin.")
        sampled = gk_samples(which, samples, seed, chart)
        for sub in sampled:
            if not sub.passed:
                report.record(f"gk {sub.data['point']}", False, detail=", ".join(sub.failures()))
        passed = sum(1 for sub in sampled if sub.passed)
        report.record("gk_samples", passed == len(sampled), detail=f"{passed}/{len(sampled)} points")

    logger.info("%s pipeline: %s", which.value, report.failures() or "all checks pass")
    return report, frame
