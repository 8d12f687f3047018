import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from functional_valuations import (
    AdmissibilityError,
    ArgumentError,
    DualCellComplex,
    MaxAffineFunction,
    UnsupportedRepresentationError,
    V_j_alpha_star,
    ValuationSpec,
    conjugate_grid,
    conjugate_max_affine,
    dual_side,
    m_alpha_star,
    make_radial_density,
    rotate_complex,
    sample_grid,
    so2_variant,
    t_j_xi_star,
    z_j_alpha_star,
)
from functional_valuations.functions import quadratic, symmetric_box
from functional_valuations.polytope import box
from functional_valuations.transform import DualCell
from functional_valuations.valuations import constant_rotation, evaluate, rotation_matrix


def shifted_absolute_value():
    return MaxAffineFunction([[-1.0], [1.0]], [1.0, -1.0])


def hinge():
    """max(0, x - 1)."""
    return MaxAffineFunction([[0.0], [1.0]], [0.0, -1.0])


def hat(kind="alpha", radius=1.0):
    return make_radial_density(kind, "hat", radius=radius)


def grid(func, dim, resolution=65):
    lower, upper = symmetric_box(dim, 2.0)
    return sample_grid(func, lower=lower, upper=upper, resolution=resolution)


def single_atom():
    """Unit mass at (1, 0)."""
    return DualCellComplex([DualCell([1.0, 0.0], box([0.0, 0.0], [1.0, 1.0]))])


class TestOperators:
    def test_top_degree_t(self):
        result = t_j_xi_star(shifted_absolute_value(), hat("xi", 2.0), 1)

        assert_allclose(result.value, [1.0])
        assert result.pathway == "exact"

    def test_t_below_top_degree_needs_alpha(self):
        with pytest.raises(ArgumentError):
            t_j_xi_star(grid(quadratic, 2), hat("xi"), 1)

    def test_t_zero_vanishes(self):
        assert_allclose(t_j_xi_star(shifted_absolute_value(), hat(), 0).value, [0.0])

    def test_m_alpha(self):
        assert_allclose(m_alpha_star(hinge(), hat(radius=2.0)).value, [0.25])

    def test_m_alpha_needs_alpha(self):
        with pytest.raises(ArgumentError):
            m_alpha_star(hinge(), hat("xi"))

    def test_z_top_degree_is_m_alpha(self):
        alpha = hat(radius=2.0)

        assert_allclose(
            z_j_alpha_star(hinge(), alpha, 1).value, m_alpha_star(hinge(), alpha).value
        )

    def test_z_1_of_shifted_quadratic(self):
        c = np.array([0.5, -0.25])
        result = z_j_alpha_star(grid(lambda p: quadratic(p) + p @ c, 2), hat(), 1)

        assert result.pathway == "grid"
        assert_allclose(result.value, 2.0 * math.pi / 3 * c, atol=2e-2)

    def test_V_0_ignores_the_function(self):
        assert V_j_alpha_star(hinge(), hat(), 0).value == pytest.approx(1.0)
        v = MaxAffineFunction([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0])
        assert V_j_alpha_star(v, hat(), 0).value == pytest.approx(math.pi / 3)

    def test_V_top_degree(self):
        result = V_j_alpha_star(shifted_absolute_value(), hat(radius=2.0), 1)

        assert result.value == pytest.approx(1.0)

    def test_degree_out_of_range(self):
        with pytest.raises(ArgumentError):
            V_j_alpha_star(hinge(), hat(), 2)


class TestRotationField:
    def test_single_atom(self):
        result = so2_variant(single_atom(), hat("xi", 2.0), constant_rotation(math.pi / 2))

        assert_allclose(result.value, [0.0, 0.5], atol=1e-12)

    def test_reflection_is_not_equivariant(self):
        xi, phi = hat("xi", 2.0), constant_rotation(math.pi / 2)
        reflection = np.diag([1.0, -1.0])
        base = so2_variant(single_atom(), xi, phi).value
        moved = so2_variant(rotate_complex(single_atom(), reflection), xi, phi).value

        assert np.linalg.norm(moved - reflection @ base) == pytest.approx(1.0)

    def test_identity_field_is_the_top_degree_t(self):
        v = MaxAffineFunction([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]], [-0.5, -0.25, 0.0])
        xi = hat("xi", 2.0)

        assert_allclose(
            so2_variant(v, xi, constant_rotation(0.0)).value, t_j_xi_star(v, xi, 2).value
        )

    def test_field_must_be_a_rotation(self):
        with pytest.raises(ArgumentError):
            so2_variant(single_atom(), hat("xi", 2.0), lambda t: np.diag([1.0, -1.0]))

    def test_planar_only(self):
        with pytest.raises(ArgumentError):
            so2_variant(hinge(), hat("xi"), constant_rotation(0.0))

    def test_grid_of_symmetric_function(self):
        result = so2_variant(grid(quadratic, 2, 33), hat("xi"), constant_rotation(1.0))

        assert_allclose(result.value, [0.0, 0.0], atol=1e-12)

    def test_rotation_matrix(self):
        assert_allclose(rotation_matrix(math.pi / 2) @ [1.0, 0.0], [0.0, 1.0], atol=1e-15)


class TestValuationSpec:
    @pytest.mark.parametrize(
        "family, kwargs",
        [
            ("w_alpha", {}),
            ("t_j_xi", {}),
            ("so2_variant", {}),
        ],
    )
    def test_incomplete_specs(self, family, kwargs):
        with pytest.raises(ArgumentError):
            ValuationSpec(family, hat("xi"), **kwargs)

    def test_alpha_family_with_xi_density(self):
        with pytest.raises(ArgumentError):
            ValuationSpec("m_alpha", hat("xi"))

    def test_inadmissible_density(self):
        inverse = make_radial_density(
            "xi", "custom", profile=lambda t: 1.0 / np.maximum(t, 1e-300)
        )

        with pytest.raises(AdmissibilityError):
            ValuationSpec("t_j_xi", inverse, j=-1)

    @pytest.mark.parametrize(
        "family, j, kind, degrees",
        [
            ("m_alpha", None, "alpha", [2, 3, 4]),
            ("t_j_xi", -1, "xi", [1, 2, 3]),
            ("z_j_alpha", 0, "alpha", [1, 1, 1]),
            ("V_j_alpha", 1, "alpha", [1, 1, 1]),
        ],
    )
    def test_degree(self, family, j, kind, degrees):
        spec = ValuationSpec(family, hat(kind), j=j)

        assert [spec.degree(n) for n in (1, 2, 3)] == degrees

    def test_applicability(self):
        top = ValuationSpec("t_j_xi", hat("xi"), j=-1)
        low = ValuationSpec("t_j_xi", hat("xi"), j=1)
        planar = ValuationSpec("so2_variant", hat("xi"), rotation_field=constant_rotation(0.0))

        assert top.applies_to(3) and top.is_top_degree(3)
        assert low.applies_to(1) and not low.applies_to(2)
        assert planar.applies_to(2) and not planar.applies_to(3)
        assert planar.degree(2) == 2
        assert not ValuationSpec("V_j_alpha", hat(), j=2).applies_to(1)

    def test_exact_capability(self):
        assert ValuationSpec("V_j_alpha", hat(), j=0).exact_capable(3)
        assert not ValuationSpec("z_j_alpha", hat(), j=0).exact_capable(3)
        assert not ValuationSpec("V_j_alpha", hat(), j=1).exact_capable(2)
        assert ValuationSpec("m_alpha", hat()).exact_capable(2)

    def test_describe_and_label(self):
        spec = ValuationSpec("V_j_alpha", hat(), j=1, side="dual")

        assert spec.label == "V_j_alpha[j=1]"
        assert not spec.is_vector()
        assert spec.describe() == {
            "family": "V_j_alpha",
            "density": {"kind": "alpha", "family": "hat", "radius": 1.0},
            "j": 1,
            "side": "dual",
        }

    def test_evaluate_dispatch(self):
        spec = ValuationSpec("t_j_xi", hat("xi", 2.0), j=-1)

        assert_allclose(evaluate(spec, shifted_absolute_value()).value, [1.0])


class TestDualSide:
    def test_exact_top_degree_t(self):
        spec = ValuationSpec("t_j_xi", hat("xi", 2.0), j=-1)
        u = conjugate_max_affine(shifted_absolute_value())

        assert_allclose(dual_side(spec, u).value, [1.0])

    def test_exact_volume(self):
        spec = ValuationSpec("V_j_alpha", hat(radius=2.0), j=-1)
        u = conjugate_max_affine(shifted_absolute_value())

        assert dual_side(spec, u).value == pytest.approx(1.0)

    def test_grid_volume(self):
        spec = ValuationSpec("V_j_alpha", hat(), j=-1)
        u = conjugate_grid(grid(quadratic, 2))
        result = dual_side(spec, u)

        assert result.pathway == "grid"
        assert result.value == pytest.approx(math.pi / 3, abs=2e-2)

    def test_grid_m_alpha_of_symmetric_function(self):
        spec = ValuationSpec("m_alpha", hat())
        u = grid(quadratic, 2, 33)

        assert_allclose(dual_side(spec, u).value, [0.0, 0.0], atol=1e-12)

    def test_intermediate_degree(self):
        spec = ValuationSpec("V_j_alpha", hat(), j=1)

        with pytest.raises(UnsupportedRepresentationError):
            dual_side(spec, grid(quadratic, 2, 33))

    def test_max_affine_is_not_a_dual_object(self):
        spec = ValuationSpec("m_alpha", hat())

        with pytest.raises(UnsupportedRepresentationError):
            dual_side(spec, hinge())
