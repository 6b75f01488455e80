import re

import pytest

from cp2_quotient import (
    REFERENCES,
    ChartSpinor,
    Example,
    Flag,
    SpinorLine,
    build_example,
    chart_spinor,
    eliminate_u,
    example_pipeline,
    full_point,
    gk_assemble,
    grid_points,
    holomorphic_volume,
    interior_theta,
    leading_scalar,
    normal_form,
    normal_form_residual,
    projectivity_check,
    run_pipeline,
    triangle_dphi,
    typemap,
)
from errors import DegenerateLeadingTerm, InvariantError, PoleAtPoint
from forms import Form, exp_form, ext_d, interior, mukai, top_coefficient, wedge
from ratfun import RatFun, gq

EXAMPLES = [Example.TRIPLE_LINE, Example.TRIANGLE]
CUBIC = "z0^3+z1^3+z2^3-3*z0*z1*z2"
INDEX = re.compile(r"(zb|z)([0-2])")


@pytest.fixture(scope="module")
def circle():
    return example_pipeline(Example.TRIPLE_LINE)[0]


def chart_form(table, text, *names):
    return Form.monomial(table, list(names), coeff=RatFun.parse(table, text))


def rotate(text, shift):
    return INDEX.sub(lambda m: f"{m.group(1)}{(int(m.group(2)) + shift) % 3}", text)


def cyclic_form(table, terms, denominator="1"):
    """Each (coeff, names) term plus its relabelings under z0 -> z1 -> z2 -> z0."""
    out = Form.zero(table)
    for shift in range(3):
        for coeff, names in terms:
            text = f"({rotate(coeff, shift)})/({rotate(denominator, shift)})"
            out = out + chart_form(table, text, *(rotate(name, shift) for name in names))
    return out


def mixed_part(form):
    """The dz_i∧dzb_j terms of a form."""
    n = form.table.n
    return Form(form.table, {m: c for m, c in form.terms.items() if len(m) == 2 and m[0] < n <= m[1] < 2 * n})


class TestDeformedStructure:
    def test_circle_identities(self, circle):
        assert circle.identities().passed

    def test_triple_line_is_closed(self):
        phi = example_pipeline(Example.TRIPLE_LINE)[1]
        assert not ext_d(phi.rep)

    def test_triangle_derivative(self):
        circle, phi = example_pipeline(Example.TRIANGLE)[:2]
        assert ext_d(phi.rep) == triangle_dphi(circle.table)

    @pytest.mark.parametrize("which", EXAMPLES)
    def test_mukai_pairing_with_conjugate(self, which):
        circle, phi = example_pipeline(which)[:2]
        value = top_coefficient(mukai(phi.rep, phi.rep.conj()))
        assert value == RatFun.parse(circle.table, REFERENCES[which].mukai)

    def test_undeformed_is_the_holomorphic_volume(self, circle):
        line = build_example(Example.UNDEFORMED, circle)
        assert line.rep == Form.monomial(circle.table, ["z0", "z1", "z2"])


class TestContraction:
    @pytest.mark.parametrize("which", EXAMPLES)
    def test_leading_scalar(self, which):
        circle, _, contracted, _ = example_pipeline(which)
        assert leading_scalar(contracted) == RatFun.parse(circle.table, REFERENCES[which].leading)

    @pytest.mark.parametrize("which", EXAMPLES)
    def test_contraction_is_a_scaled_exponential(self, which):
        circle, _, contracted, _ = example_pipeline(which)
        assert not normal_form_residual(contracted)
        assert not interior(circle.theta, contracted.rep)

    def test_leading_factor_must_survive(self, circle):
        with pytest.raises(DegenerateLeadingTerm):
            interior_theta(SpinorLine(Form.scalar(circle.table, 1)), circle)

    def test_scalar_part_required(self, circle):
        with pytest.raises(DegenerateLeadingTerm):
            leading_scalar(SpinorLine(Form.dvar(circle.table, "z0")))


class TestProjective:
    @pytest.mark.parametrize("which", EXAMPLES)
    def test_basic_form(self, which):
        circle, _, _, projective = example_pipeline(which)
        report = projectivity_check(projective, circle)
        assert report.passed, report.failures()

    @pytest.mark.parametrize("which", EXAMPLES)
    def test_chart_form_is_closed(self, which):
        assert not ext_d(chart_spinor(which, 0))

    def test_triple_line_affine_form(self, circle):
        table = circle.table
        r2 = RatFun.parse(table, "1+z1*zb1+z2*zb2")
        beta = (chart_form(table, "-2", "z1", "z2")
                + (chart_form(table, "1", "z2", "zb2") - chart_form(table, "1", "z1", "zb1")).scale(
                    (r2 * 2).inverse()))
        d_r2 = ext_d(Form.scalar(table, r2))
        shift = Form.dvar(table, "z1").scale(RatFun.var(table, "zb1")) - Form.dvar(table, "z2").scale(
            RatFun.var(table, "zb2"))
        beta = beta - wedge(d_r2, shift).scale((r2 ** 2 * 2).inverse())
        assert SpinorLine(chart_spinor(Example.TRIPLE_LINE, 0)) == SpinorLine(exp_form(beta))

    def test_spinor_lines_compare_projectively(self, circle):
        line = SpinorLine(Form.scalar(circle.table, 1) + Form.dvar(circle.table, "z0").scale(2))
        assert line == line.rescale(RatFun.parse(circle.table, "z1+3"))
        assert line != SpinorLine(Form.scalar(circle.table, 1))


class TestDisplayedForms:
    def test_triple_line_expansion(self, circle):
        table = circle.table
        phi = example_pipeline(Example.TRIPLE_LINE)[1].rep
        expanded = (chart_form(table, "1", "z0", "z1", "z2") + chart_form(table, "-z0^2/2", "z0")
                    + chart_form(table, "-z0^2/4", "z0", "z2", "zb2")
                    + chart_form(table, "z0^2/4", "z0", "z1", "zb1")
                    + chart_form(table, "z0^2/8", "z0", "z1", "z2", "zb2", "zb1"))
        assert phi == expanded
        beta = (chart_form(table, "-2/z0^2", "z1", "z2") + chart_form(table, "1/2", "z2", "zb2")
                - chart_form(table, "1/2", "z1", "zb1"))
        assert phi == wedge(chart_form(table, "-z0^2/2", "z0"), exp_form(beta))

    def test_triangle_leading_factor(self):
        circle, phi = example_pipeline(Example.TRIANGLE)[:2]
        assert phi.rep.part(1) == cyclic_form(circle.table, [("-z0^2+z1*z2", ["z0"])], "2")

    def test_triple_line_contraction(self, circle):
        table = circle.table
        c, beta = normal_form(example_pipeline(Example.TRIPLE_LINE)[2])
        assert c == RatFun.parse(table, "-1/2i*z0^3")
        inner = (chart_form(table, "2*z2/z0^2", "z1") - chart_form(table, "2*z1/z0^2", "z2")
                 + chart_form(table, "z2/2", "zb2") + chart_form(table, "zb2/2", "z2")
                 - chart_form(table, "z1/2", "zb1") - chart_form(table, "zb1/2", "z1"))
        expected = (-wedge(chart_form(table, "1/z0", "z0"), inner) + chart_form(table, "-2/z0^2", "z1", "z2")
                    + chart_form(table, "1/2", "z2", "zb2") - chart_form(table, "1/2", "z1", "zb1"))
        assert beta == expected

    def test_triangle_contraction(self):
        circle, _, contracted, _ = example_pipeline(Example.TRIANGLE)
        table = circle.table
        c, beta = normal_form(contracted)
        assert c == RatFun.parse(table, f"-1/2i*({CUBIC})")
        displayed = cyclic_form(table, [
            ("z2*z0*zb0+z2*z1*zb1+z0^2*zb1+2*z0*z1*zb2+z1^2*zb0", ["z0", "z1"]),
            ("z1^3-z2^3", ["z0", "zb0"]),
            ("z0^2*z1-2*z0*z2^2+z1^2*z2", ["z0", "zb1"]),
            ("-z0^2*z2+2*z0*z1^2-z1*z2^2", ["z0", "zb2"]),
        ], f"2*({CUBIC})")
        # i_∂θ of the undeformed volume, over c
        volume_term = interior(circle.e, holomorphic_volume(table)).scale(RatFun.parse(table, f"-2/({CUBIC})"))
        assert beta == displayed + volume_term

    def test_triple_line_homogeneous_form(self, circle):
        table = circle.table
        projective = example_pipeline(Example.TRIPLE_LINE)[3]
        inner = (chart_form(table, "2*z2/z0^2", "z1") - chart_form(table, "2*z1/z0^2", "z2")
                 + chart_form(table, "z2/(2*u)", "zb2") + chart_form(table, "zb2/(2*u)", "z2")
                 - chart_form(table, "z1/(2*u)", "zb1") - chart_form(table, "zb1/(2*u)", "z1"))
        beta = (-wedge(chart_form(table, "1/z0", "z0"), inner) + chart_form(table, "-2/z0^2", "z1", "z2")
                + chart_form(table, "1/(2*u)", "z2", "zb2") - chart_form(table, "1/(2*u)", "z1", "zb1"))
        radial = (chart_form(table, "(z2*zb2-z1*zb1)/(z0*u)", "z0") + chart_form(table, "zb1/u", "z1")
                  - chart_form(table, "zb2/u", "z2"))
        beta = beta - wedge(circle.du_over_2u(), radial)
        assert projective.rep == exp_form(beta)

    def test_triangle_homogeneous_form(self):
        circle, _, _, projective = example_pipeline(Example.TRIANGLE)
        table = circle.table
        beta = eliminate_u(projective.rep, circle).part(2)
        displayed = cyclic_form(table, [
            ("(z1^3-z2^3-z0^3-z0*z1*z2)*z1*zb1-(z2^3-z0^3-z1^3-z0*z1*z2)*z2*zb2"
             "+2*z0^2*(z2^2*zb1-z1^2*zb2)", ["z0", "zb0"]),
            ("z1*zb0*(z0^3-z1^3+z2^3+z0*z1*z2)-2*z0*zb2*(z1^3+z2^3-z0*z1*z2)"
             "-2*z0*zb0*z0*z2^2+2*z2*zb2*z2*z1^2", ["z0", "zb1"]),
            ("z2*zb0*(-z0^3-z1^3+z2^3-z0*z1*z2)+2*z0*zb1*(z1^3+z2^3-z0*z1*z2)"
             "+2*z0*zb0*z0*z1^2-2*z1*zb1*z1*z2^2", ["z0", "zb2"]),
        ], f"2*(z0*zb0+z1*zb1+z2*zb2)^2*({CUBIC})")
        assert mixed_part(beta) == displayed

    def test_triangle_affine_form(self):
        table = example_pipeline(Example.TRIANGLE)[0].table
        beta = chart_spinor(Example.TRIANGLE, 0).part(2)
        den = "2*(1+z1*zb1+z2*zb2)^2*(1+z1^3+z2^3-3*z1*z2)"
        displayed = [
            ("(z2^3-1-z1^3-z1*z2)*z2*zb2-(1-z1^3-z2^3-z1*z2)+2*z1^2*(zb2-z2^2)", "z1", "zb1"),
            ("(1-z1^3-z2^3-z1*z2)-(z1^3-z2^3-1-z1*z2)*z1*zb1+2*z2^2*(z1^2-zb1)", "z2", "zb2"),
            ("z2*zb1*(z1^3-z2^3+1+z1*z2)-2*z1*(z2^3+1-z1*z2)-2*z1*zb1*z1+2*z2^2", "z1", "zb2"),
            ("z1*zb2*(-z2^3-1+z1^3-z1*z2)+2*z2*(1+z1^3-z1*z2)+2*z2*zb2*z2-2*z1^2", "z2", "zb1"),
        ]
        expected = Form.zero(table)
        for num, *names in displayed:
            expected = expected + chart_form(table, f"({num})/({den})", *names)
        assert mixed_part(beta) == expected


class TestTypemap:
    def test_grid(self):
        assert grid_points(0) == []
        assert len(grid_points(1)) == 1
        ticks = sorted({p[0] for p in grid_points(3)}, key=lambda c: c.x)
        assert ticks == [gq(-1), gq(0), gq(1)]

    def test_triple_line_changes_type_on_the_line(self):
        spinor = ChartSpinor(chart_spinor(Example.TRIPLE_LINE, 1), 1)
        frame = typemap(spinor, [(gq(0), gq(1)), (gq(1), gq(0))], 1)
        assert list(frame["type"]) == [2, 0]
        assert list(frame["flag"]) == [Flag.LOCUS.value, Flag.OK.value]

    def test_triangle_vertex_is_a_pole(self):
        spinor = ChartSpinor(chart_spinor(Example.TRIANGLE, 0), 0)
        with pytest.raises(PoleAtPoint):
            spinor.mukai_alpha.evaluate_exact(full_point((gq(1), gq(1)), 0))
        frame = typemap(spinor, [(gq(1), gq(1))], 0)
        assert frame["type"][0] == 2

    def test_empty_grid(self):
        frame = typemap(chart_spinor(Example.TRIPLE_LINE, 0), [], 0)
        assert frame.empty
        assert list(frame.columns)[:2] == ["re_z1", "im_z1"]


class TestGeneralizedKahler:
    def test_triple_line_at_the_origin(self):
        report = gk_assemble(Example.TRIPLE_LINE, (gq(0), gq(0)))
        assert report.passed, report.failures()
        assert report.data["g"] == [
            ["1", "0", "1/2", "0"],
            ["0", "1", "0", "-1/2"],
            ["1/2", "0", "1", "0"],
            ["0", "-1/2", "0", "1"],
        ]

    @pytest.mark.parametrize("which", EXAMPLES)
    def test_pipeline(self, which):
        report, frame = run_pipeline(which, grid=3, samples=3)
        assert report.passed, report.failures()
        assert len(frame) == 9

    def test_pipeline_without_typemap(self):
        report, frame = run_pipeline(Example.TRIPLE_LINE, checks=("build", "contract"))
        assert frame is None
        assert report.passed

    def test_undeformed_has_no_pipeline(self):
        with pytest.raises(InvariantError):
            run_pipeline(Example.UNDEFORMED)
