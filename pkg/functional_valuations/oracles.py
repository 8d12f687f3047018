"""
Independent reference computations used by the property suites.

Quasi-Monte-Carlo integrals use scrambled Sobol points; the reported
standard error is the plain Monte-Carlo one, which overestimates the
error of the scrambled sequence.
"""

import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from .density import Weight
from .functions import ConvexFunction
from .polytope import Polytope
from .result import Result, result_values
from .transform import DualCellComplex, add_linear, transform_fconvf
from .type_utils import ArrayLike, FloatArray, as_float_array
from .valuation_error import ArgumentError

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES_LOG2 = 20
_CHUNK = 1 << 16


class MonteCarloEstimate:
    """Sample mean integral and its standard error (per component)."""

    value: FloatArray
    standard_error: FloatArray
    samples: int

    def __init__(self, value: ArrayLike, standard_error: ArrayLike, samples: int) -> None:
        self.value = np.atleast_1d(as_float_array(value))
        self.standard_error = np.atleast_1d(as_float_array(standard_error))
        self.samples = samples

    def __repr__(self) -> str:
        return (
            f"MonteCarloEstimate(value={self.value.tolist()}, "
            f"standard_error={self.standard_error.tolist()}, samples={self.samples})"
        )


def _box_integral(
    lower: FloatArray,
    upper: FloatArray,
    integrand: Callable[[FloatArray], FloatArray],
    *,
    samples_log2: int,
    seed: Optional[int],
) -> MonteCarloEstimate:
    dim = len(lower)
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    points = qmc.scale(sampler.random_base2(m=samples_log2), lower, upper)
    total = None
    total_sq = None
    for start in range(0, len(points), _CHUNK):
        values = np.atleast_2d(integrand(points[start : start + _CHUNK]).T).T
        part, part_sq = values.sum(axis=0), (values**2).sum(axis=0)
        total = part if total is None else total + part
        total_sq = part_sq if total_sq is None else total_sq + part_sq
    assert total is not None and total_sq is not None
    count = len(points)
    mean = total / count
    variance = np.maximum(total_sq / count - mean**2, 0.0)
    volume = float(np.prod(upper - lower))
    return MonteCarloEstimate(
        volume * mean, volume * np.sqrt(variance / count), count
    )


def monte_carlo_dual_theta0(
    complex_: DualCellComplex,
    zeta: Weight,
    *,
    samples_log2: int = DEFAULT_SAMPLES_LOG2,
    seed: Optional[int] = None,
) -> MonteCarloEstimate:
    """``int_{dom u} zeta(grad u(y)) y dy`` by sampling the domain's bounding box."""
    lower, upper = complex_.domain.bounding_box()

    def integrand(points: FloatArray) -> FloatArray:
        inside = complex_.domain.contains(points, tol=0.0)
        values = zeta(complex_.gradient_at(points))[:, None] * points
        result: FloatArray = np.where(inside[:, None], values, 0.0)
        return result

    estimate = _box_integral(lower, upper, integrand, samples_log2=samples_log2, seed=seed)
    logger.debug("monte carlo dual integral: %r", estimate)
    return estimate


def monte_carlo_body(
    body: Polytope,
    *,
    samples_log2: int = DEFAULT_SAMPLES_LOG2,
    seed: Optional[int] = None,
) -> Tuple[MonteCarloEstimate, MonteCarloEstimate]:
    """Rejection estimates of the volume and the moment vector of ``body``."""
    lower, upper = body.bounding_box()

    def integrand(points: FloatArray) -> FloatArray:
        inside = body.contains(points, tol=0.0).astype(np.float64)
        result: FloatArray = np.hstack([inside[:, None], inside[:, None] * points])
        return result

    both = _box_integral(lower, upper, integrand, samples_log2=samples_log2, seed=seed)
    volume = MonteCarloEstimate(both.value[:1], both.standard_error[:1], both.samples)
    moment = MonteCarloEstimate(both.value[1:], both.standard_error[1:], both.samples)
    return volume, moment


class AssociatedScalar:
    """
    ``z0(v)`` fitted from ``z(v + <y, .>) - z(v) = z0(v) y`` over the shifts ``y``.

    ``residual`` is the largest deviation from the isotropic model;
    ``error_estimate`` sums the quadrature estimates of every evaluation.
    """

    value: float
    residual: float
    error_estimate: float

    def __init__(self, value: float, residual: float, error_estimate: float) -> None:
        self.value = value
        self.residual = residual
        self.error_estimate = error_estimate

    def __repr__(self) -> str:
        return f"AssociatedScalar(value={self.value!r}, residual={self.residual:.3g})"


def extract_associated_scalar(
    z: Callable[[ConvexFunction], Result],
    v: ConvexFunction,
    shifts: Sequence[ArrayLike],
) -> AssociatedScalar:
    """Least-squares ``z0(v)`` from the translation behaviour of ``z`` at ``v``."""
    directions = np.array([np.atleast_1d(as_float_array(y)) for y in shifts])
    if directions.ndim != 2 or directions.shape[1] != v.dim:
        raise ArgumentError("shift directions do not match dimension", detail={"dim": v.dim})
    if np.linalg.matrix_rank(directions) < v.dim:
        raise ArgumentError(
            "shift directions do not span R^n", detail={"shifts": directions.tolist()}
        )
    base = z(v)
    base_value = result_values(base)
    error = base.error_estimate
    deltas = []
    for y in directions:
        moved = z(transform_fconvf(v, add_linear(y)))
        deltas.append(result_values(moved) - base_value)
        error += moved.error_estimate + base.error_estimate
    diffs = np.array(deltas)
    if diffs.shape[1] != v.dim:
        raise ArgumentError("associated scalars need a vector valued operator")
    value = float(np.sum(diffs * directions) / np.sum(directions * directions))
    residual = float(np.abs(diffs - value * directions).max())
    return AssociatedScalar(value, residual, error)


def radial_form_residual(
    psi: Weight, rng: np.random.Generator, dim: int, *, samples: int = 64
) -> float:
    """
    Largest component of ``psi(y)`` orthogonal to ``y`` over random ``y`` in
    the support ball. Rotation-equivariant vector weights have none.
    """
    directions = rng.standard_normal((samples, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.uniform(0.0, psi.support_radius, size=samples)
    points = directions * radii[:, None]
    values = psi(points)
    along = np.sum(values * directions, axis=1, keepdims=True) * directions
    return float(np.abs(values - along).max())
