import pytest
from hypothesis import given
from hypothesis import strategies as st

from courant import (
    D_operator,
    adjoint_kernel_check,
    courant_bracket,
    curvature_of_splitting,
    gauge_check,
    lie_cocycle,
    preserves_gcs,
    symplectic_structure,
    verify_axioms,
)
from errors import FrameNotIsotropic, InvariantError, NotIsotropic
from forms import Form, GeneralizedField, b_transform_field, coordinate_field, ext_d, real_chart
from ratfun import RatFun, parse_scalar
from tests.strategies import closed_twists, forms, generalized_fields, ratfuns, real_tables, tables


class TestAxioms:
    @given(st.data())
    def test_courant_algebroid_axioms_hold_for_closed_twists(self, data):
        table = data.draw(real_tables)
        H = data.draw(closed_twists(table))
        sections = [data.draw(generalized_fields(table)) for _ in range(3)]
        f = data.draw(ratfuns(table))
        report = verify_axioms(sections, H, f)
        assert report.passed, report.failures()

    @given(st.data())
    def test_b_field_gauge_symmetry(self, data):
        table = data.draw(tables)
        H = data.draw(closed_twists(table))
        B = data.draw(forms(table, degree=2))
        v, w = data.draw(generalized_fields(table)), data.draw(generalized_fields(table))
        assert gauge_check(B, v, w, H)

    def test_needs_three_sections(self):
        table = real_chart(2)
        with pytest.raises(InvariantError):
            verify_axioms([coordinate_field(table, "z0")] * 2, Form.zero(table), RatFun.one(table))


class TestBracket:
    table = real_chart(3)

    def test_bracket_of_vector_and_one_form_is_lie_derivative(self):
        X = GeneralizedField.vector(self.table, {"z0": 1})
        xi = GeneralizedField.covector(Form.dvar(self.table, "z1").scale(parse_scalar(self.table, "z0")))
        assert courant_bracket(X, xi) == GeneralizedField.covector(Form.dvar(self.table, "z1"))

    def test_twist_contributes_double_contraction(self):
        H = Form.monomial(self.table, ["z0", "z1", "z2"])
        d0 = coordinate_field(self.table, "z0")
        d1 = coordinate_field(self.table, "z1")
        assert courant_bracket(d0, d1, H) == GeneralizedField.covector(Form.dvar(self.table, "z2"))

    def test_closed_one_forms_are_central(self):
        closed = GeneralizedField.covector(ext_d(Form.scalar(self.table, parse_scalar(self.table, "z0*z1"))))
        assert adjoint_kernel_check(closed)
        open_form = GeneralizedField.covector(Form.dvar(self.table, "z1").scale(parse_scalar(self.table, "z0")))
        assert not adjoint_kernel_check(open_form)
        assert not adjoint_kernel_check(coordinate_field(self.table, "z0"))

    def test_cocycle_of_coordinate_fields(self):
        H = Form.monomial(self.table, ["z0", "z1", "z2"], parse_scalar(self.table, "z0"))
        d0 = coordinate_field(self.table, "z0")
        d1 = coordinate_field(self.table, "z1")
        assert lie_cocycle(d0, d1, H) == Form.monomial(self.table, ["z0", "z2"], -1)
        assert lie_cocycle(d0, d1, H) == -ext_d(courant_bracket(d0, d1, H).cov)
        X = GeneralizedField.vector(self.table, {"z0": parse_scalar(self.table, "z1")})
        volume = Form.monomial(self.table, ["z0", "z1", "z2"])
        assert lie_cocycle(X, d1, volume) == Form.monomial(self.table, ["z1", "z2"], -1)
        assert not lie_cocycle(d0, d1, volume)


class TestSplittings:
    table = real_chart(3)

    def test_curvature_of_a_b_field_splitting(self):
        B = Form.monomial(self.table, ["z1", "z2"], coeff=parse_scalar(self.table, "z0"))
        nabla = {name: b_transform_field(B, coordinate_field(self.table, name)) for name in ("z0", "z1", "z2")}
        assert curvature_of_splitting(nabla, self.table).H == ext_d(B)

    def test_splitting_must_be_isotropic(self):
        lift = coordinate_field(self.table, "z0") + GeneralizedField.covector(Form.dvar(self.table, "z0"))
        with pytest.raises(NotIsotropic):
            curvature_of_splitting({"z0": lift}, self.table)


class TestStructures:
    table = real_chart(2)

    def test_preserves_tangent_bundle(self):
        frame = [coordinate_field(self.table, "z0"), coordinate_field(self.table, "z1")]
        assert preserves_gcs(coordinate_field(self.table, "z0"), frame)
        xi = GeneralizedField.covector(Form.dvar(self.table, "z1").scale(parse_scalar(self.table, "z0")))
        assert not preserves_gcs(xi, frame)

    def test_partial_frame_membership(self):
        frame = [coordinate_field(self.table, "z0")]
        z0, z1 = parse_scalar(self.table, "z0"), parse_scalar(self.table, "z1")
        assert not preserves_gcs(GeneralizedField.vector(self.table, {"z1": z0}), frame)
        assert preserves_gcs(GeneralizedField.vector(self.table, {"z0": z0}), frame)
        assert preserves_gcs(GeneralizedField.vector(self.table, {"z0": z1}), frame)

    def test_frame_must_be_isotropic(self):
        lift = coordinate_field(self.table, "z0") + GeneralizedField.covector(Form.dvar(self.table, "z0"))
        with pytest.raises(FrameNotIsotropic):
            preserves_gcs(coordinate_field(self.table, "z1"), [lift])

    def test_hamiltonian_vector_field_of_the_rotation(self):
        omega = Form.monomial(self.table, ["z0", "z1"])
        J = symplectic_structure(omega)
        f_im = parse_scalar(self.table, "(z0^2+z1^2)/2")
        expected = GeneralizedField.vector(self.table, {"z0": RatFun.var(self.table, "z1"),
                                                        "z1": -RatFun.var(self.table, "z0")})
        assert D_operator(RatFun.zero(self.table), f_im, J) == expected
