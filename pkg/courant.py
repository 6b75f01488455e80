#!/usr/bin/env python3
"""
courant.py - The H-twisted Courant bracket on T ⊕ T* and checks built on it.

    [X+ξ, Y+η]_H = [X,Y] + L_X η − i_Y dξ + i_Y i_X H

with the pairing ⟨X+ξ, Y+η⟩ = ½(η(X) + ξ(Y)) and D = d, which makes
[e, e] = D⟨e, e⟩ hold on the nose.
"""

import logging
from itertools import permutations

from errors import FrameNotIsotropic, InvariantError, NotIsotropic
from forms import (
    Form,
    GeneralizedField,
    TwistForm,
    as_form,
    b_transform_field,
    evaluate_covector,
    ext_d,
    interior,
    lie_bracket,
    lie_derivative,
    pairing,
)
from ratfun import RatFun
from reports import Report
from split_linalg import block, inverse, mat_scale, mat_vec, rref, zeros

logger = logging.getLogger(__name__)


def courant_bracket(v, w, H=None):
    """Dorfman form of the twisted Courant bracket."""
    table = v.table
    H = Form.zero(table) if H is None else as_form(H)
    vec = lie_bracket(v.vector_part(), w.vector_part())
    cov = lie_derivative(v.vec, w.cov) - interior(w.vec, ext_d(v.cov))
    if H:
        cov = cov + interior(w.vec, interior(v.vec, H))
    return GeneralizedField(table, vec.vec, cov)


def dorfman_D(f):
    """D f = d f as a generalized field."""
    if not isinstance(f, Form):
        f = Form.scalar(f.table, f)
    return GeneralizedField.covector(ext_d(f))


def anchor_derivative(v, f):
    """π(v) f."""
    return evaluate_covector(ext_d(Form.scalar(f.table, f)), v)


def verify_axioms(sections, H, f):
    """
    Check the Courant algebroid axioms on every ordered triple of sections.

      C1  [e1,[e2,e3]] = [[e1,e2],e3] + [e2,[e1,e3]]
      C2  π[e1,e2] = [πe1, πe2]
      C3  [e1, f e2] = f[e1,e2] + (π(e1) f) e2
      C4  π(e1)⟨e2,e3⟩ = ⟨[e1,e2],e3⟩ + ⟨e2,[e1,e3]⟩
      C5  [e1,e1] = D⟨e1,e1⟩
      skew  [e1,e2] + [e2,e1] = 2D⟨e1,e2⟩

    Each axiom keeps the first nonzero residual it meets.
    """
    if len(sections) < 3:
        raise InvariantError("verify_axioms needs at least three sections")
    if f is None:
        raise InvariantError("verify_axioms needs a test function")
    table = sections[0].table
    Hf = as_form(H)

    def br(a, b):
        return courant_bracket(a, b, Hf)

    residuals = {name: None for name in ("C1", "C2", "C3", "C4", "C5", "skew")}

    def keep(name, value):
        if residuals[name] is None and value:
            residuals[name] = value

    for e1, e2, e3 in permutations(sections, 3):
        keep("C1", br(e1, br(e2, e3)) - br(br(e1, e2), e3) - br(e2, br(e1, e3)))
        keep("C4", anchor_derivative(e1, pairing(e2, e3))
             - pairing(br(e1, e2), e3) - pairing(e2, br(e1, e3)))
    for e1, e2 in permutations(sections, 2):
        keep("C2", br(e1, e2).vector_part() - lie_bracket(e1.vector_part(), e2.vector_part()))
        keep("C3", br(e1, e2.scale(f)) - br(e1, e2).scale(f) - e2.scale(anchor_derivative(e1, f)))
        keep("skew", br(e1, e2) + br(e2, e1) - dorfman_D(pairing(e1, e2)).scale(2))
    for e1 in sections:
        keep("C5", br(e1, e1) - dorfman_D(pairing(e1, e1)))

    report = Report(title="Courant algebroid axioms")
    report.data["H"] = str(Hf)
    report.data["sections"] = len(sections)
    for name, residual in residuals.items():
        report.record(name, residual)
    logger.info("verify_axioms: %d sections, failures %s", len(sections), report.failures() or "none")
    return report


def _coordinate_variables(table):
    return list(range(table.nvars))


def curvature_of_splitting(nabla, table):
    """
    Curvature 3-form of an isotropic splitting ∇ of T ⊕ T*.

    nabla maps variable names or indices to ∇(∂_v); unlisted variables use
    ∇(∂_v) = ∂_v. H(∂a, ∂b, ∂c) is read off as the dv_c coefficient of
    2 s[∇∂a, ∇∂b], where s(X + ξ) = ½ ξ.
    """
    variables = _coordinate_variables(table)
    lifts = {}
    for v in variables:
        lifts[v] = GeneralizedField.vector(table, {v: 1})
    for key, field in (nabla or {}).items():
        lifts[table.index(key)] = field

    for a in variables:
        for b in variables:
            if b < a:
                continue
            p = pairing(lifts[a], lifts[b])
            if p:
                raise NotIsotropic(f"⟨∇∂{table.names[a]}, ∇∂{table.names[b]}⟩ ≠ 0", payload=p)
        if lifts[a].component(a) != 1 or any(k != a for k in lifts[a].vec):
            raise InvariantError(f"∇∂{table.names[a]} does not lift ∂{table.names[a]}")

    terms = {}
    for a in variables:
        for b in variables:
            if b <= a:
                continue
            cov = courant_bracket(lifts[a], lifts[b]).cov
            for c in variables:
                if c <= b:
                    continue
                coeff = cov.coeff((c,))
                if coeff:
                    terms[(a, b, c)] = coeff
    H = Form(table, terms)
    return TwistForm(H)


def preserves_gcs(v, frame, H=None):
    """
    True iff [v, L] ⊆ L for L spanned by the isotropic frame. Membership is
    decided over the rational functions of the chart, so the frame need not
    be maximal.
    """
    for i, a in enumerate(frame):
        for b in frame[i:]:
            p = pairing(a, b)
            if p:
                raise FrameNotIsotropic("frame does not span an isotropic subbundle", payload=p)
    ff = FunctionField(v.table)
    rows = [field_components(w) for w in frame]
    rank = len(rref(rows, ff)[0])
    for w2 in frame:
        image = field_components(courant_bracket(v, w2, H))
        if len(rref(rows + [image], ff)[0]) > rank:
            return False
    return True


def adjoint_kernel_check(v, H=None):
    """
    True iff ad_v kills every coordinate vector field ∂_a, every coordinate
    1-form dv_a and every product v_b dv_a; equivalently v is a closed 1-form.
    """
    table = v.table
    tests = []
    for a in _coordinate_variables(table):
        tests.append(GeneralizedField.vector(table, {a: 1}))
        tests.append(GeneralizedField.covector(Form(table, {(a,): RatFun.one(table)})))
        for b in _coordinate_variables(table):
            tests.append(GeneralizedField.covector(Form(table, {(a,): RatFun.var(table, b)})))
    return all(not courant_bracket(v, t, H) for t in tests)


def gauge_check(B, v, w, H=None):
    """[e^B v, e^B w]_H = e^B [v, w]_{H + dB}."""
    table = v.table
    Hf = Form.zero(table) if H is None else as_form(H)
    lhs = courant_bracket(b_transform_field(B, v), b_transform_field(B, w), Hf)
    rhs = b_transform_field(B, courant_bracket(v, w, TwistForm(Hf + ext_d(B), check=False)))
    return lhs == rhs


def lie_cocycle(X, Y, H):
    """c(X, Y) = d i_X i_Y H."""
    return ext_d(interior(X.vec, interior(Y.vec, as_form(H))))


# ── fiberwise structures with function entries ─────────────────────────────

class FunctionField:
    """RatFun scalars of one chart behind the field interface of split_linalg."""

    name = "function"

    def __init__(self, table):
        self.table = table
        self.zero = RatFun.zero(table)
        self.one = RatFun.one(table)

    def convert(self, x):
        return x if isinstance(x, RatFun) else RatFun.const(self.table, x)

    def is_zero(self, x):
        return not x

    def normalize_row(self, row):
        return row

    def pick_pivot(self, m, start, col):
        for i in range(start, len(m)):
            if m[i][col]:
                return i
        return None

    def clean(self, x):
        return x


def field_components(v):
    """(vector components, covector components) over all chart variables."""
    table = v.table
    return [v.component(k) for k in range(table.nvars)] + [v.cov.coeff((k,)) for k in range(table.nvars)]


def field_from_components(table, comps):
    nv = table.nvars
    vec = {k: comps[k] for k in range(nv) if comps[k]}
    cov = Form(table, {(k,): comps[nv + k] for k in range(nv)})
    return GeneralizedField(table, vec, cov)


def symplectic_structure(omega):
    """J_ω = [[0, −W⁻¹], [W, 0]] with RatFun entries, W: X ↦ i_X ω."""
    table = omega.table
    ff = FunctionField(table)
    nv = table.nvars
    W = [[ff.zero] * nv for _ in range(nv)]
    for a in range(nv):
        row = interior({a: ff.one}, omega)
        for b in range(nv):
            W[b][a] = row.coeff((b,))
    try:
        W_inv = inverse(W, ff)
    except ValueError:
        raise InvariantError("ω is degenerate on the chart") from None
    z = zeros(nv, nv, ff)
    return block(z, mat_scale(W_inv, -ff.one), W, z)


def D_operator(f_re, f_im, J):
    """Df = d(Re f) − J d(Im f) for J a matrix of RatFun on (∂_v, dv)."""
    table = f_re.table
    ff = FunctionField(table)
    d_re = dorfman_D(f_re)
    d_im = field_components(dorfman_D(f_im))
    return d_re - field_from_components(table, list(mat_vec(J, d_im, ff)))
