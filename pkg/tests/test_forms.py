import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import InvariantError
from forms import (
    Form,
    GeneralizedField,
    TwistForm,
    b_transform,
    b_transform_field,
    clifford,
    exp_form,
    ext_d,
    interior,
    lie_bracket,
    lie_derivative,
    mukai,
    pairing,
    real_chart,
    wedge,
)
from ratfun import RatFun, VarTable, parse_scalar
from tests.strategies import forms, generalized_fields, tables, vector_fields


class TestExteriorCalculus:
    @given(st.data())
    def test_d_squared_vanishes(self, data):
        table = data.draw(tables)
        a = data.draw(forms(table))
        assert not ext_d(ext_d(a))

    @given(st.data())
    def test_graded_leibniz_rule(self, data):
        table = data.draw(tables)
        k = data.draw(st.integers(0, table.coord_count))
        a, b = data.draw(forms(table, degree=k)), data.draw(forms(table))
        sign = -1 if k % 2 else 1
        assert ext_d(wedge(a, b)) == wedge(ext_d(a), b) + wedge(a, ext_d(b)).scale(sign)

    @given(st.data())
    def test_lie_derivative_commutes_with_d(self, data):
        table = data.draw(tables)
        X, a = data.draw(vector_fields(table)), data.draw(forms(table))
        assert lie_derivative(X, ext_d(a)) == ext_d(lie_derivative(X, a))

    @given(st.data())
    def test_commutator_of_lie_derivative_and_interior(self, data):
        table = data.draw(tables)
        X, Y = data.draw(vector_fields(table)), data.draw(vector_fields(table))
        a = data.draw(forms(table))
        lhs = lie_derivative(X, interior(Y, a)) - interior(Y, lie_derivative(X, a))
        assert lhs == interior(lie_bracket(X, Y), a)

    @given(st.data())
    def test_interior_is_nilpotent(self, data):
        table = data.draw(tables)
        X, a = data.draw(vector_fields(table)), data.draw(forms(table))
        assert not interior(X, interior(X, a))

    def test_exterior_derivative_of_a_product(self):
        table = real_chart(2)
        f = Form.scalar(table, parse_scalar(table, "z0*z1"))
        expected = Form.dvar(table, "z0").scale(RatFun.var(table, "z1")) + Form.dvar(table, "z1").scale(
            RatFun.var(table, "z0"))
        assert ext_d(f) == expected

    def test_pullback_substitutes_differentials(self):
        table = real_chart(2)
        pulled = Form.dvar(table, "z0").pullback({"z0": parse_scalar(table, "z1^2")})
        assert pulled == Form.dvar(table, "z1").scale(parse_scalar(table, "2*z1"))


class TestClifford:
    @given(st.data())
    def test_clifford_square_is_the_pairing(self, data):
        table = data.draw(tables)
        v, phi = data.draw(generalized_fields(table)), data.draw(forms(table))
        assert clifford(v, clifford(v, phi)) == phi.scale(pairing(v, v))

    @given(st.data())
    def test_b_field_intertwines_the_clifford_action(self, data):
        table = data.draw(tables)
        B = data.draw(forms(table, degree=2))
        v, phi = data.draw(generalized_fields(table)), data.draw(forms(table))
        lhs = clifford(b_transform_field(B, v), b_transform(-B, phi))
        assert lhs == b_transform(-B, clifford(v, phi))

    @given(st.data())
    def test_exp_of_b_field(self, data):
        table = data.draw(tables)
        B = data.draw(forms(table, degree=2))
        assert exp_form(B) == b_transform(B, Form.scalar(table, 1))


class TestMukai:
    @given(st.data())
    def test_b_invariance(self, data):
        table = data.draw(tables)
        B = data.draw(forms(table, degree=2))
        phi, psi = data.draw(forms(table)), data.draw(forms(table))
        assert mukai(b_transform(B, phi), b_transform(B, psi)) == mukai(phi, psi)

    @given(st.data())
    def test_symmetry_by_dimension(self, data):
        table = data.draw(tables)
        phi, psi = data.draw(forms(table)), data.draw(forms(table))
        sign = -1 if (table.coord_count * (table.coord_count - 1) // 2) % 2 else 1
        assert mukai(phi, psi) == mukai(psi, phi).scale(sign)

    def test_known_value(self):
        table = VarTable(1, aux=())
        phi = Form.scalar(table, 1) + Form.monomial(table, ["z0", "zb0"])
        psi = Form.scalar(table, 1) - Form.monomial(table, ["z0", "zb0"])
        # σ flips the sign of 2-forms.
        assert mukai(phi, psi) == Form.monomial(table, ["z0", "zb0"], coeff=2)


class TestInvariants:
    table = real_chart(3)

    def test_repeated_generator(self):
        with pytest.raises(InvariantError):
            Form.monomial(self.table, ["z0", "z0"])

    def test_twist_must_have_degree_three(self):
        H = Form.monomial(self.table, ["z0", "z1", "z2"], coeff=parse_scalar(self.table, "z0"))
        TwistForm(H)
        H = Form.monomial(self.table, ["z0", "z1"], coeff=parse_scalar(self.table, "z2"))
        with pytest.raises(InvariantError):
            TwistForm(H)

    def test_non_closed_twist(self):
        t = VarTable(4, aux=(), real=True)
        H = Form.monomial(t, ["z0", "z1", "z2"], coeff=parse_scalar(t, "z3"))
        with pytest.raises(InvariantError):
            TwistForm(H)

    def test_covector_part_is_a_one_form(self):
        with pytest.raises(InvariantError):
            GeneralizedField(self.table, cov=Form.monomial(self.table, ["z0", "z1"]))

    def test_interior_needs_a_vector(self):
        v = GeneralizedField.covector(Form.dvar(self.table, "z0"))
        with pytest.raises(InvariantError):
            interior(v, Form.dvar(self.table, "z1"))
