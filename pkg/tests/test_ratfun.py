import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from errors import DivisionByZero, ParseError, PoleAtPoint
from ratfun import (
    I_UNIT,
    RatFun,
    VarTable,
    cube_root_factorization_check,
    gaussian_str,
    gconj,
    gq,
    lambda_point_on_cubic,
    parse_scalar,
    ratfun_arith,
    ratfun_conj,
    ratfun_diff,
    ratfun_eq,
    ratfun_eval,
    ratfun_subst,
)
from tests.strategies import complex_tables, gaussians, nonzero_gaussians, ratfuns, tables


class TestParsing:
    table = VarTable(2)

    def test_cancels_common_factors(self):
        assert parse_scalar(self.table, "(z0^2-1)/(z0-1)") == parse_scalar(self.table, "z0+1")

    def test_imaginary_literals(self):
        assert parse_scalar(self.table, "3/2i").constant_value() == gq(0, (3, 2))
        assert parse_scalar(self.table, "i*i") == -1

    def test_conjugate_variables(self):
        z0 = parse_scalar(self.table, "z0")
        assert z0.conj() == parse_scalar(self.table, "zb0")

    def test_auxiliary_variable(self):
        assert parse_scalar(self.table, "u - z0*zb0 - z1*zb1").depends_on(self.table.index("u"))

    @pytest.mark.parametrize("text", ["1/0", "z0/(z1-z1)", "z9", "2^z0", "z0^-1", "z0^2i", "z0 +", "(z0", "", "z0 $ 1"])
    def test_rejects_malformed_text(self, text):
        with pytest.raises(ParseError):
            parse_scalar(self.table, text)

    def test_powers_bind_before_division(self):
        z0 = RatFun.var(self.table, "z0")
        assert parse_scalar(self.table, "z0^2/2") == z0 ** 2 * gq((1, 2))
        r2 = parse_scalar(self.table, "z0*zb0")
        assert parse_scalar(self.table, "(z0*zb0)^2/4-1") == r2 ** 2 * gq((1, 4)) - 1
        assert parse_scalar(self.table, "z0^ 3/2i") == z0 ** 3 * gq(0, (-1, 2))

    def test_canonical_text(self):
        assert str(parse_scalar(self.table, "z0*(1+i) - z0*i")) == "z0"
        assert gaussian_str(gq((3, 2), (1, 2))) == "3/2+1/2i"
        assert gaussian_str(-I_UNIT) == "-i"


class TestVarTable:
    def test_names(self):
        assert VarTable(2).names == ("z0", "z1", "zb0", "zb1", "u")
        assert VarTable(2, aux=(), real=True).names == ("z0", "z1")

    def test_unknown_variable(self):
        with pytest.raises(KeyError):
            VarTable(1).index("w")

    def test_real_chart_has_no_antiholomorphic_variables(self):
        with pytest.raises(KeyError):
            VarTable(1, real=True).antiholo(0)


class TestRatFun:
    @given(st.data())
    def test_distributivity(self, data):
        table = data.draw(tables)
        a, b, c = (data.draw(ratfuns(table)) for _ in range(3))
        assert (a + b) * c == a * c + b * c

    @given(st.data())
    def test_division_inverts_multiplication(self, data):
        table = data.draw(tables)
        a, b = data.draw(ratfuns(table)), data.draw(ratfuns(table))
        assume(b)
        assert (a * b) / b == a

    @given(st.data())
    def test_product_rule(self, data):
        table = data.draw(tables)
        a, b = data.draw(ratfuns(table)), data.draw(ratfuns(table))
        v = data.draw(st.integers(0, table.nvars - 1))
        assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)

    @given(st.data())
    def test_conjugation_is_an_involution(self, data):
        table = data.draw(complex_tables)
        a, b = data.draw(ratfuns(table)), data.draw(ratfuns(table))
        assert a.conj().conj() == a
        assert (a * b).conj() == a.conj() * b.conj()

    @given(st.data(), gaussians)
    def test_substitution_then_evaluation(self, data, value):
        table = data.draw(complex_tables)
        a = data.draw(ratfuns(table))
        point = [value] + [gq(1)] * (table.n - 1)
        # Substituting z0 and zb0 agrees with evaluating at the point.
        substituted = a.subst("z0", value).subst("zb0", gconj(value))
        assert substituted.evaluate_exact(point) == a.evaluate_exact(point)

    @given(nonzero_gaussians)
    def test_constant_inverse(self, c):
        table = VarTable(1)
        assert RatFun.const(table, c).inverse() * c == 1

    def test_inverse_of_zero(self):
        with pytest.raises(DivisionByZero):
            RatFun.zero(VarTable(1)).inverse()

    def test_pole(self):
        table = VarTable(1, aux=(), real=True)
        f = parse_scalar(table, "1/(z0-1)")
        with pytest.raises(PoleAtPoint):
            f.evaluate([1.0])
        with pytest.raises(PoleAtPoint):
            f.evaluate_exact([gq(1)])
        assert f.evaluate_exact([gq(3)]) == gq((1, 2))

    def test_float_evaluation_fills_in_conjugates(self):
        table = VarTable(1)
        f = parse_scalar(table, "z0*zb0 + u")
        assert f.evaluate([1 + 1j]) == pytest.approx(4.0)


class TestOperations:
    table = VarTable(3)

    def parse(self, text):
        return parse_scalar(self.table, text)

    def test_arithmetic(self):
        assert ratfun_arith(self.parse("z0"), self.parse("zb0"), "add") == self.parse("z0+zb0")
        assert ratfun_arith(self.parse("1/z0"), self.parse("1/z0^2"), "div") == self.parse("z0")
        with pytest.raises(DivisionByZero):
            ratfun_arith(self.parse("z0"), self.parse("z1-z1"), "div")
        with pytest.raises(ValueError):
            ratfun_arith(self.parse("z0"), self.parse("z1"), "pow")

    def test_equality(self):
        assert ratfun_eq(self.parse("(z0^2-zb0^2)/(z0-zb0)"), self.parse("z0+zb0"))
        assert not ratfun_eq(self.parse("z0"), self.parse("zb0"))

    def test_wirtinger_partials(self):
        f = self.parse("z0^2*zb1")
        assert ratfun_diff(f, "z0") == self.parse("2*z0*zb1")
        assert ratfun_diff(f, "zb1") == self.parse("z0^2")
        assert ratfun_diff(self.parse("1/z0^2"), "z0") == self.parse("-2/z0^3")

    def test_conjugation(self):
        assert ratfun_conj(self.parse("i*z0")) == self.parse("-i*zb0")
        assert ratfun_conj(self.parse("z0*zb0")) == self.parse("z0*zb0")

    def test_evaluation(self):
        table = VarTable(3, aux=())
        assert ratfun_eval(parse_scalar(table, "z0*zb0"), [1 + 1j, 0, 0]) == pytest.approx(2.0)
        cubic = parse_scalar(table, "z0^3+z1^3+z2^3-3*z0*z1*z2")
        assert abs(ratfun_eval(cubic, [1, 1, 1])) < 1e-12
        with pytest.raises(PoleAtPoint):
            ratfun_eval(parse_scalar(table, "1/z0"), [0, 1, 1])

    def test_substitution(self):
        assert ratfun_subst(self.parse("(z1^3-z2^3)/(2*u)"), "u", 1) == self.parse("(z1^3-z2^3)/2")
        cubic = self.parse("z0^3+z1^3+z2^3-3*z0*z1*z2")
        assert ratfun_subst(cubic, "z0", 1) == self.parse("1+z1^3+z2^3-3*z1*z2")
        assert not ratfun_subst(self.parse("z0^2/2"), "z0", 0)


def test_triangle_cubic_splits_over_cube_roots_of_unity():
    assert cube_root_factorization_check()
    assert lambda_point_on_cubic()
