import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from functional_valuations import (
    ArgumentError,
    CoverageError,
    MaxAffineFunction,
    UnsupportedRepresentationError,
    elementary_symmetric,
    general_simple_valuation,
    hess_j_integrate,
    make_radial_density,
    ma_atoms,
    ma_integrate,
    ma_integrate_vec,
    sample_grid,
    theta0_integrate,
)
from functional_valuations.functions import quadratic, symmetric_box
from functional_valuations.measures import (
    check_coverage,
    finite_difference_derivatives,
    mollify,
    pairwise_sum,
)


def shifted_absolute_value():
    """|x - 1|."""
    return MaxAffineFunction([[-1.0], [1.0]], [1.0, -1.0])


def capped_absolute_value():
    return MaxAffineFunction([[-1.0], [0.0], [1.0]], [0.0, 1.0, 0.0])


def quadratic_grid(dim, resolution=65):
    lower, upper = symmetric_box(dim, 2.0)
    return sample_grid(quadratic, lower=lower, upper=upper, resolution=resolution)


def hat(kind="alpha", radius=1.0):
    return make_radial_density(kind, "hat", radius=radius)


class TestElementarySymmetric:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_eigenvalues(self, n):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(10, n, n))
        sym = a + np.swapaxes(a, -1, -2)
        for j in range(n + 1):
            expected = [(-1) ** j * np.poly(np.linalg.eigvalsh(m))[j] for m in sym]
            assert_allclose(elementary_symmetric(sym, j), expected, atol=1e-9)

    @pytest.mark.parametrize("j", [-1, 3])
    def test_degree_out_of_range(self, j):
        with pytest.raises(ArgumentError):
            elementary_symmetric(np.eye(2), j)


class TestGridHelpers:
    def test_pairwise_sum(self):
        terms = np.arange(10.0).reshape(5, 2)

        assert_allclose(pairwise_sum(terms), terms.sum(axis=0))
        assert pairwise_sum(np.zeros((0, 3))).tolist() == [0.0, 0.0, 0.0]

    def test_finite_differences_are_exact_on_quadratics(self):
        lower, upper = symmetric_box(2, 1.0)
        f = sample_grid(
            lambda p: quadratic(p) + p[:, 0] * p[:, 1] + p[:, 0],
            lower=lower,
            upper=upper,
            resolution=9,
        )
        grad, hess = finite_difference_derivatives(np.asarray(f.values), f.spacing)
        inner = f.nodes().reshape(9, 9, 2)[1:-1, 1:-1]

        assert grad.shape == (7, 7, 2)
        assert_allclose(hess, np.broadcast_to([[1.0, 1.0], [1.0, 1.0]], hess.shape), atol=1e-9)
        assert_allclose(grad[..., 0], inner[..., 0] + inner[..., 1] + 1.0, atol=1e-12)

    def test_mollify_keeps_constants(self):
        assert_allclose(mollify(np.full((5, 5), 2.0)), 2.0)

    def test_coverage(self):
        f = sample_grid(quadratic, lower=[-1.2], upper=[1.2], resolution=9)

        check_coverage(f, 0.5, margin_nodes=2)
        with pytest.raises(CoverageError):
            check_coverage(f, 1.0, margin_nodes=2)


class TestAtoms:
    def test_single_kink(self):
        measure = ma_atoms(shifted_absolute_value())

        assert len(measure) == 1
        assert_allclose(measure.locations, [[1.0]], atol=1e-12)
        assert_allclose(measure.masses, [2.0])
        assert_allclose(measure.cell_moments, [[0.0]], atol=1e-12)

    def test_two_kinks(self):
        measure = ma_atoms(capped_absolute_value())

        assert_allclose(measure.locations, [[-1.0], [1.0]])
        assert_allclose(measure.masses, [1.0, 1.0])
        assert_allclose(measure.cell_moments, [[-0.5], [0.5]])
        assert measure.total_mass() == pytest.approx(2.0)

    def test_affine_function_has_no_mass(self):
        measure = ma_atoms(MaxAffineFunction([[1.0]], [2.0]))

        assert len(measure) == 0
        assert measure.total_mass() == 0.0
        assert measure.locations.shape == (0, 1)
        assert ma_integrate(MaxAffineFunction([[1.0]], [2.0]), hat().scalar_weight()).value == 0.0


class TestExactIntegrals:
    def test_ma_integrate(self):
        result = ma_integrate(shifted_absolute_value(), hat(radius=2.0).scalar_weight())

        assert result.value == pytest.approx(1.0)
        assert result.pathway == "exact"
        assert result.error_estimate == 0.0

    def test_ma_integrate_vec(self):
        result = ma_integrate_vec(shifted_absolute_value(), hat("xi", 2.0).vector_weight())

        assert_allclose(result.value, [1.0])

    def test_theta0(self):
        hinge = MaxAffineFunction([[0.0], [1.0]], [0.0, -1.0])
        result = theta0_integrate(hinge, hat(radius=2.0).scalar_weight())

        assert_allclose(result.value, [0.25])

    def test_position_factor(self):
        result = hess_j_integrate(
            shifted_absolute_value(), 1, hat(radius=2.0).scalar_weight(), factor="position"
        )

        assert_allclose(result.value, [1.0])

    def test_intermediate_degree_needs_a_grid(self):
        v = MaxAffineFunction([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0])

        with pytest.raises(UnsupportedRepresentationError):
            hess_j_integrate(v, 1, hat().scalar_weight())

    def test_degree_out_of_range(self):
        with pytest.raises(ArgumentError):
            hess_j_integrate(shifted_absolute_value(), 2, hat().scalar_weight())

    def test_general_simple_valuation(self):
        result = general_simple_valuation(
            shifted_absolute_value(),
            hat("xi", 2.0).vector_weight(),
            hat(radius=2.0).scalar_weight(),
        )

        assert_allclose(result.value, [1.0], atol=1e-12)


class TestGridIntegrals:
    def test_ma_of_quadratic(self):
        result = ma_integrate(quadratic_grid(2), hat().scalar_weight())

        assert result.pathway == "grid"
        assert result.value == pytest.approx(math.pi / 3, abs=1e-2)
        assert result.error_estimate < 1e-1

    def test_trace_of_quadratic(self):
        result = hess_j_integrate(quadratic_grid(2), 1, hat().scalar_weight())

        assert result.value == pytest.approx(2.0 * math.pi / 3, abs=2e-2)

    def test_symmetric_integrands_vanish(self):
        f = quadratic_grid(2, resolution=33)
        zeta = hat().scalar_weight()

        assert_allclose(theta0_integrate(f, zeta).value, [0.0, 0.0], atol=1e-12)
        assert_allclose(
            hess_j_integrate(f, 2, zeta, factor="position").value, [0.0, 0.0], atol=1e-12
        )
        assert_allclose(
            general_simple_valuation(f, hat("xi").vector_weight(), zeta).value,
            [0.0, 0.0],
            atol=1e-12,
        )

    def test_smoothing_is_recorded(self):
        result = ma_integrate(quadratic_grid(1), hat().scalar_weight(), smooth=True)

        assert result.mollified
        assert result.value == pytest.approx(1.0, abs=1e-2)

    def test_vector_weight_takes_no_factor(self):
        with pytest.raises(ArgumentError):
            hess_j_integrate(
                quadratic_grid(1, resolution=33), 1, hat("xi").vector_weight(), factor="gradient"
            )

    def test_support_outside_the_box(self):
        with pytest.raises(CoverageError):
            ma_integrate(quadratic_grid(1, resolution=33), hat(radius=2.0).scalar_weight())
