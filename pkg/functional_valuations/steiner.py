"""
Polynomial expansions of valuations.

``steiner_expand`` fits ``r -> m*_alpha(v + r q)`` by a vector polynomial of
degree ``n + 1`` and attributes every coefficient to the intrinsic-moment and
Minkowski-vector parts that produce it: expanding ``det(Hess v + r I)`` gives

    m*_alpha(v + r q) = sum_j r^(n-j) z*_(j+1)(v) + r^(n-j+1) t*_j(v),

so the coefficient of ``r^k`` is the z-part with ``j = n - k`` plus the
t-part with ``j = n - k + 1``.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .density import RadialDensity
from .functions import ConvexFunction, GridFunction
from .result import Result, result_values
from .transform import add_quadratic, scale, transform_fconvf
from .type_utils import ArrayLike, FloatArray, as_float_array
from .valuation_error import ArgumentError
from .valuations import m_alpha_star, t_j_xi_star, z_j_alpha_star

logger = logging.getLogger(__name__)

CONDITION_WARNING = 1e8


def default_r_values(dim: int) -> List[float]:
    """``0, 1/4, ..., (n + 3)/4``."""
    return [k / 4.0 for k in range(dim + 4)]


def vandermonde_fit(
    nodes: FloatArray, samples: FloatArray, degree: int
) -> Tuple[FloatArray, float, float]:
    matrix = np.vander(nodes, degree + 1, increasing=True)
    coefficients, *_ = np.linalg.lstsq(matrix, samples, rcond=None)
    residual = float(np.abs(matrix @ coefficients - samples).max())
    condition = float(np.linalg.cond(matrix))
    if condition > CONDITION_WARNING:
        logger.warning(
            "ill-conditioned polynomial fit: condition %.3g, residual %.3g",
            condition,
            residual,
        )
    return coefficients, residual, condition


class AttributedCoefficient:
    """
    Coefficient of ``r^power`` with the two direct operator values it
    aggregates and how far the fit lies from their sum.
    """

    power: int
    coefficient: FloatArray
    z_part: Optional[Tuple[int, FloatArray]]
    t_part: Optional[Tuple[int, FloatArray]]
    direct: FloatArray
    cross_check: float
    error_estimate: float

    def __init__(
        self,
        *,
        power: int,
        coefficient: FloatArray,
        z_part: Optional[Tuple[int, FloatArray]],
        t_part: Optional[Tuple[int, FloatArray]],
        error_estimate: float,
    ) -> None:
        self.power = power
        self.coefficient = coefficient
        self.z_part = z_part
        self.t_part = t_part
        self.direct = np.zeros_like(coefficient)
        for part in (z_part, t_part):
            if part is not None:
                self.direct = self.direct + part[1]
        self.cross_check = float(np.linalg.norm(coefficient - self.direct))
        self.error_estimate = error_estimate

    def as_dict(self) -> Dict[str, Any]:
        return {
            "power": self.power,
            "coefficient": self.coefficient.tolist(),
            "z_part": None
            if self.z_part is None
            else {"j": self.z_part[0], "value": self.z_part[1].tolist()},
            "t_part": None
            if self.t_part is None
            else {"j": self.t_part[0], "value": self.t_part[1].tolist()},
            "cross_check": self.cross_check,
            "error_estimate": self.error_estimate,
        }


class SteinerExpansion:
    """
    Attributes:
        dim: n
        degree: n + 1
        r_values: sample radii
        samples: ``m*_alpha(v + r q)`` per radius, shape ``(len(r_values), n)``
        coefficients: ``c_0 .. c_(n+1)``, shape ``(n + 2, n)``
        fit_residual: max abs deviation of the fitted polynomial at the samples
        condition_number: of the Vandermonde matrix
        attributed: one entry per coefficient
    """

    def __init__(
        self,
        *,
        dim: int,
        r_values: FloatArray,
        samples: FloatArray,
        sample_errors: FloatArray,
        coefficients: FloatArray,
        fit_residual: float,
        condition_number: float,
        attributed: List[AttributedCoefficient],
    ) -> None:
        self.dim = dim
        self.degree = dim + 1
        self.r_values = r_values
        self.samples = samples
        self.sample_errors = sample_errors
        self.coefficients = coefficients
        self.fit_residual = fit_residual
        self.condition_number = condition_number
        self.attributed = attributed

    def __repr__(self) -> str:
        return (
            f"SteinerExpansion(dim={self.dim}, coefficients={self.coefficients.tolist()}, "
            f"fit_residual={self.fit_residual:.3g})"
        )

    def max_cross_check(self) -> float:
        return max(a.cross_check for a in self.attributed)

    def evaluate(self, r: float) -> FloatArray:
        powers = r ** np.arange(self.degree + 1)
        result: FloatArray = powers @ self.coefficients
        return result

    def as_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "r_values": self.r_values.tolist(),
            "coefficients": self.coefficients.tolist(),
            "fit_residual": self.fit_residual,
            "condition_number": self.condition_number,
            "attributed": [a.as_dict() for a in self.attributed],
        }

    def sample_rows(self) -> List[List[float]]:
        """``r, m_1 .. m_n, error_estimate`` per radius, for CSV export."""
        return [
            [float(r), *map(float, row), float(err)]
            for r, row, err in zip(self.r_values, self.samples, self.sample_errors)
        ]


def steiner_expand(
    v: GridFunction,
    alpha: RadialDensity,
    r_values: Optional[Sequence[float]] = None,
    *,
    smooth: bool = False,
) -> SteinerExpansion:
    """Fit ``m*_alpha(v + r q)`` in ``r`` and attribute its coefficients."""
    n = v.dim
    radii = as_float_array(default_r_values(n) if r_values is None else list(r_values))
    if len(np.unique(radii)) < n + 2 or len(np.unique(radii)) != len(radii):
        raise ArgumentError(
            "need at least n + 2 distinct radii", detail={"n": n, "r_values": radii.tolist()}
        )
    if np.any(radii < 0.0):
        raise ArgumentError("radii must be >= 0", detail={"r_values": radii.tolist()})

    results = [
        m_alpha_star(transform_fconvf(v, add_quadratic(float(r))), alpha, smooth=smooth)
        for r in radii
    ]
    samples = np.array([res.value for res in results])
    errors = np.array([res.error_estimate for res in results])
    coefficients, fit_residual, condition = vandermonde_fit(radii, samples, n + 1)

    attributed = []
    for k in range(n + 2):
        z_part = t_part = None
        part_error = 0.0
        j_z, j_t = n - k, n - k + 1
        if 0 <= j_z <= n:
            z = z_j_alpha_star(v, alpha, j_z, smooth=smooth)
            z_part = (j_z, np.asarray(z.value))
            part_error += z.error_estimate
        if 0 <= j_t <= n:
            t = t_j_xi_star(v, alpha, j_t, smooth=smooth)
            t_part = (j_t, np.asarray(t.value))
            part_error += t.error_estimate
        attributed.append(
            AttributedCoefficient(
                power=k,
                coefficient=coefficients[k],
                z_part=z_part,
                t_part=t_part,
                error_estimate=part_error,
            )
        )
    expansion = SteinerExpansion(
        dim=n,
        r_values=radii,
        samples=samples,
        sample_errors=errors,
        coefficients=coefficients,
        fit_residual=fit_residual,
        condition_number=condition,
        attributed=attributed,
    )
    logger.debug("steiner expansion: %r", expansion)
    return expansion


class HomogeneousDecomposition:
    """``z(lam v) = sum_s lam^s Z_s(v)`` fitted over sample factors ``lam``."""

    def __init__(
        self, *, lambdas: FloatArray, components: FloatArray, fit_residual: float
    ) -> None:
        self.lambdas = lambdas
        self.components = components
        self.fit_residual = fit_residual

    def __repr__(self) -> str:
        return (
            f"HomogeneousDecomposition(degrees={len(self.components)}, "
            f"fit_residual={self.fit_residual:.3g})"
        )

    def dominant_degree(self) -> int:
        norms = np.linalg.norm(self.components.reshape(len(self.components), -1), axis=1)
        return int(np.argmax(norms))


def homogeneous_decomposition(
    operator: Callable[[ConvexFunction], Result],
    v: ConvexFunction,
    max_degree: int,
    lambdas: Optional[ArrayLike] = None,
) -> HomogeneousDecomposition:
    """Split ``operator`` at ``v`` into homogeneous components of degree 0..max_degree."""
    if max_degree < 0:
        raise ArgumentError("max_degree must be >= 0", detail={"max_degree": max_degree})
    factors = (
        np.arange(1, max_degree + 3) / 2.0 if lambdas is None else as_float_array(lambdas)
    )
    if len(factors) < max_degree + 1 or np.any(factors <= 0.0):
        raise ArgumentError(
            "need max_degree + 1 positive factors", detail={"lambdas": factors.tolist()}
        )
    samples = np.array(
        [result_values(operator(transform_fconvf(v, scale(float(lam))))) for lam in factors]
    )
    components, residual, _ = vandermonde_fit(factors, samples, max_degree)
    return HomogeneousDecomposition(lambdas=factors, components=components, fit_residual=residual)
