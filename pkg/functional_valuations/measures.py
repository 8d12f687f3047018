"""
Monge-Ampere and Hessian-measure integrals on both pathways.

Exact pathway: a max-affine ``v`` has an atomic Monge-Ampere measure with an
atom at every gradient point ``x_k`` of its dual complex, of mass
``vol(C_k)``; the Hessian measure pairs each atom with the moment vector
``m(C_k)`` of its subgradient cell.

Grid pathway: Riemann sums over interior nodes of the centered
finite-difference Hessian (and gradient), with an error estimate taken from
the same sum on the grid with every other node.
"""

import logging
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy import ndimage
from typing_extensions import Literal

from .density import Weight
from .functions import ConvexFunction, GridFunction, MaxAffineFunction
from .result import ScalarResult, VectorResult
from .transform import DualCellComplex, conjugate_max_affine
from .type_utils import ArrayLike, FloatArray, as_float_array, frozen
from .valuation_error import (
    ArgumentError,
    CoverageError,
    UnsupportedRepresentationError,
)

logger = logging.getLogger(__name__)

WeightFactor = Literal["one", "gradient", "position"]
"""What multiplies the scalar weight in a Hessian integral: 1, grad v or x."""

GridIntegrand = Callable[[FloatArray, FloatArray, FloatArray], FloatArray]
"""``(points, gradients, hessians) -> per-node values``, all over interior nodes."""


class Atom:
    location: FloatArray
    mass: float
    cell_moment: FloatArray

    def __init__(self, location: ArrayLike, mass: float, cell_moment: ArrayLike) -> None:
        self.location = frozen(np.atleast_1d(as_float_array(location)))
        self.mass = float(mass)
        self.cell_moment = frozen(np.atleast_1d(as_float_array(cell_moment)))

    def __repr__(self) -> str:
        return (
            f"Atom(location={self.location.tolist()}, mass={self.mass!r}, "
            f"cell_moment={self.cell_moment.tolist()})"
        )


class AtomicMeasure:
    """
    Monge-Ampere measure of a max-affine function, with the moment vector of
    each subgradient cell stored next to its mass. Zero-mass atoms are dropped.
    """

    dim: int
    atoms: List[Atom]

    def __init__(self, dim: int, atoms: List[Atom]) -> None:
        self.dim = dim
        self.atoms = [atom for atom in atoms if atom.mass > 0.0]

    @classmethod
    def from_complex(cls, complex_: DualCellComplex) -> "AtomicMeasure":
        return cls(
            complex_.dim,
            [Atom(c.gradient, c.volume, c.moment) for c in complex_.cells],
        )

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        return f"AtomicMeasure(dim={self.dim}, atoms={len(self.atoms)})"

    @property
    def locations(self) -> FloatArray:
        if not self.atoms:
            return np.zeros((0, self.dim))
        return np.array([a.location for a in self.atoms])

    @property
    def masses(self) -> FloatArray:
        return np.array([a.mass for a in self.atoms])

    @property
    def cell_moments(self) -> FloatArray:
        if not self.atoms:
            return np.zeros((0, self.dim))
        return np.array([a.cell_moment for a in self.atoms])

    def total_mass(self) -> float:
        return float(self.masses.sum()) if self.atoms else 0.0


def ma_atoms(v: Union[MaxAffineFunction, DualCellComplex]) -> AtomicMeasure:
    """Atoms of ``MA(v; .)``; a dual complex is read as the conjugate of ``v``."""
    complex_ = v if isinstance(v, DualCellComplex) else conjugate_max_affine(v)
    return AtomicMeasure.from_complex(complex_)


def elementary_symmetric(hessians: ArrayLike, j: int) -> FloatArray:
    """
    ``[H]_j`` for a stack of symmetric ``n x n`` matrices, ``n <= 3``.

    Closed forms: 1, the trace, the sum of principal 2x2 minors and the
    determinant.
    """
    h = as_float_array(hessians)
    n = h.shape[-1]
    if not 0 <= j <= n:
        raise ArgumentError("degree j out of range", detail={"j": j, "n": n})
    if j == 0:
        return np.ones(h.shape[:-2])
    if j == 1:
        trace: FloatArray = np.trace(h, axis1=-2, axis2=-1)
        return trace
    if n == 2:
        det2: FloatArray = h[..., 0, 0] * h[..., 1, 1] - h[..., 0, 1] * h[..., 1, 0]
        return det2
    if j == 2:
        minors: FloatArray = (
            h[..., 0, 0] * h[..., 1, 1]
            - h[..., 0, 1] * h[..., 1, 0]
            + h[..., 0, 0] * h[..., 2, 2]
            - h[..., 0, 2] * h[..., 2, 0]
            + h[..., 1, 1] * h[..., 2, 2]
            - h[..., 1, 2] * h[..., 2, 1]
        )
        return minors
    det3: FloatArray = (
        h[..., 0, 0] * (h[..., 1, 1] * h[..., 2, 2] - h[..., 1, 2] * h[..., 2, 1])
        - h[..., 0, 1] * (h[..., 1, 0] * h[..., 2, 2] - h[..., 1, 2] * h[..., 2, 0])
        + h[..., 0, 2] * (h[..., 1, 0] * h[..., 2, 1] - h[..., 1, 1] * h[..., 2, 0])
    )
    return det3


def _interior(values: FloatArray, shifts: Tuple[int, ...]) -> FloatArray:
    index = tuple(slice(1 + s, values.shape[axis] - 1 + s) for axis, s in enumerate(shifts))
    return values[index]


def finite_difference_derivatives(
    values: FloatArray, spacing: FloatArray
) -> Tuple[FloatArray, FloatArray]:
    """
    Centered gradient and Hessian at the interior nodes.

    Returns arrays of shape ``interior + (n,)`` and ``interior + (n, n)``.
    """
    n = values.ndim
    zero = (0,) * n
    center = _interior(values, zero)
    grad = np.empty(center.shape + (n,))
    hess = np.empty(center.shape + (n, n))

    def shift(axis: int, step: int) -> Tuple[int, ...]:
        return tuple(step if k == axis else 0 for k in range(n))

    for i in range(n):
        plus = _interior(values, shift(i, 1))
        minus = _interior(values, shift(i, -1))
        grad[..., i] = (plus - minus) / (2.0 * spacing[i])
        hess[..., i, i] = (plus - 2.0 * center + minus) / spacing[i] ** 2
        for k in range(i + 1, n):

            def corner(si: int, sk: int) -> FloatArray:
                return _interior(
                    values, tuple(si if a == i else sk if a == k else 0 for a in range(n))
                )

            mixed = (corner(1, 1) - corner(1, -1) - corner(-1, 1) + corner(-1, -1)) / (
                4.0 * spacing[i] * spacing[k]
            )
            hess[..., i, k] = mixed
            hess[..., k, i] = mixed
    return grad, hess


def mollify(values: FloatArray) -> FloatArray:
    """One pass of nearest-neighbour (star) averaging."""
    n = values.ndim
    kernel = np.zeros((3,) * n)
    center = (1,) * n
    kernel[center] = 1.0
    for axis in range(n):
        for step in (0, 2):
            kernel[tuple(step if k == axis else 1 for k in range(n))] = 1.0
    kernel /= kernel.sum()
    result: FloatArray = ndimage.convolve(values, kernel, mode="nearest")
    return result


def pairwise_sum(terms: FloatArray) -> FloatArray:
    """Sum over axis 0 by a fixed binary tree of slab partial sums."""
    partials = [terms[i] for i in range(terms.shape[0])]
    if not partials:
        return np.zeros(terms.shape[1:])
    while len(partials) > 1:
        paired = [partials[i] + partials[i + 1] for i in range(0, len(partials) - 1, 2)]
        if len(partials) % 2:
            paired.append(partials[-1])
        partials = paired
    return np.asarray(partials[0])


def check_coverage(v: GridFunction, radius: float, *, margin_nodes: int) -> None:
    """The closed ball of ``radius`` must sit strictly inside the trimmed box."""
    margin = margin_nodes * v.spacing
    if np.any(-radius <= v.lower + margin) or np.any(radius >= v.upper - margin):
        raise CoverageError(
            "weight support is not strictly inside the trimmed grid box",
            detail={
                "radius": radius,
                "lower": v.lower.tolist(),
                "upper": v.upper.tolist(),
                "margin_nodes": margin_nodes,
            },
        )


def _riemann_sum(
    values: FloatArray,
    lower: FloatArray,
    spacing: FloatArray,
    integrand: GridIntegrand,
    smooth: bool,
) -> FloatArray:
    if smooth:
        values = mollify(values)
    grad, hess = finite_difference_derivatives(values, spacing)
    n = values.ndim
    axes = [lower[i] + spacing[i] * np.arange(1, values.shape[i] - 1) for i in range(n)]
    points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    flat = integrand(points.reshape(-1, n), grad.reshape(-1, n), hess.reshape(-1, n, n))
    terms = flat.reshape(points.shape[:1] + (-1,) + flat.shape[1:])
    slabs = np.sum(terms, axis=1)
    return pairwise_sum(slabs) * float(np.prod(spacing))


def grid_integral(
    v: GridFunction,
    integrand: GridIntegrand,
    *,
    support_radius: float,
    smooth: bool = False,
) -> Tuple[FloatArray, float]:
    """
    Riemann sum of ``integrand`` over the interior nodes of ``v``.

    Returns the value and ``|I_h - I_2h|``. ``smooth`` mollifies the samples
    first (one extra node of margin is then required).
    """
    check_coverage(v, support_radius, margin_nodes=4 if smooth else 2)
    fine = _riemann_sum(np.asarray(v.values), v.lower, v.spacing, integrand, smooth)
    coarse_values = np.asarray(v.values)[tuple(slice(None, None, 2) for _ in range(v.dim))]
    coarse = _riemann_sum(coarse_values, v.lower, 2.0 * v.spacing, integrand, smooth)
    error = float(np.linalg.norm(np.atleast_1d(fine - coarse)))
    logger.debug("grid integral at %s nodes: error estimate %.3g", v.resolution, error)
    return np.asarray(fine), error


def _hess_integrand(weight: Weight, j: int, factor: WeightFactor) -> GridIntegrand:
    def integrand(points: FloatArray, grad: FloatArray, hess: FloatArray) -> FloatArray:
        w = weight(points)
        if weight.vector:
            base = w * elementary_symmetric(hess, j)[:, None]
        else:
            base = w * elementary_symmetric(hess, j)
        if factor == "one":
            return np.asarray(base)
        if weight.vector:
            raise ArgumentError("vector weights take no extra factor")
        extra = grad if factor == "gradient" else points
        result: FloatArray = base[:, None] * extra
        return result

    return integrand


def _scalar(values: FloatArray, error: float, smooth: bool) -> ScalarResult:
    return ScalarResult(
        float(np.asarray(values).reshape(-1)[0]),
        error_estimate=error,
        pathway="grid",
        mollified=smooth,
    )


def _vector(values: FloatArray, error: float, smooth: bool) -> VectorResult:
    return VectorResult(values, error_estimate=error, pathway="grid", mollified=smooth)


def _as_measure(v: Union[MaxAffineFunction, DualCellComplex]) -> AtomicMeasure:
    return ma_atoms(v)


def ma_integrate(
    v: Union[ConvexFunction, DualCellComplex], zeta: Weight, *, smooth: bool = False
) -> ScalarResult:
    """``int zeta dMA(v)``."""
    if isinstance(v, GridFunction):
        value, error = grid_integral(
            v,
            _hess_integrand(zeta, v.dim, "one"),
            support_radius=zeta.support_radius,
            smooth=smooth,
        )
        return _scalar(value, error, smooth)
    measure = _as_measure(v)
    if not measure.atoms:
        return ScalarResult(0.0)
    return ScalarResult(float(zeta(measure.locations) @ measure.masses))


def ma_integrate_vec(
    v: Union[ConvexFunction, DualCellComplex], psi: Weight, *, smooth: bool = False
) -> VectorResult:
    """``int psi dMA(v)`` for a vector weight ``psi``."""
    if isinstance(v, GridFunction):
        value, error = grid_integral(
            v, _hess_integrand(psi, v.dim, "one"), support_radius=psi.support_radius, smooth=smooth
        )
        return _vector(value, error, smooth)
    measure = _as_measure(v)
    dim = measure.dim
    if not measure.atoms:
        return VectorResult(np.zeros(dim))
    return VectorResult(measure.masses @ psi(measure.locations))


def theta0_integrate(
    v: Union[ConvexFunction, DualCellComplex], zeta: Weight, *, smooth: bool = False
) -> VectorResult:
    """``int zeta(x) y dTheta_0(v; (x, y))``, i.e. ``int zeta grad v det Hess v``."""
    if isinstance(v, GridFunction):
        value, error = grid_integral(
            v,
            _hess_integrand(zeta, v.dim, "gradient"),
            support_radius=zeta.support_radius,
            smooth=smooth,
        )
        return _vector(value, error, smooth)
    measure = _as_measure(v)
    if not measure.atoms:
        return VectorResult(np.zeros(measure.dim))
    return VectorResult(zeta(measure.locations) @ measure.cell_moments)


def hess_j_integrate(
    v: ConvexFunction,
    j: int,
    weight: Weight,
    *,
    factor: WeightFactor = "one",
    smooth: bool = False,
) -> Union[ScalarResult, VectorResult]:
    """
    ``int weight(x) * factor * [Hess v(x)]_j dx`` with factor 1, grad v or x.

    Max-affine inputs are only supported at ``j = n``, where the integral
    is a sum over the Monge-Ampere atoms.
    """
    n = v.dim
    if not 0 <= j <= n:
        raise ArgumentError("degree j out of range", detail={"j": j, "n": n})
    vector_out = weight.vector or factor != "one"
    if isinstance(v, MaxAffineFunction):
        if j != n:
            raise UnsupportedRepresentationError(
                "intermediate Hessian integrals need a grid function",
                detail={"j": j, "n": n},
            )
        if factor == "gradient":
            return theta0_integrate(v, weight)
        if factor == "position":
            measure = ma_atoms(v)
            if not measure.atoms:
                return VectorResult(np.zeros(n))
            scaled = weight(measure.locations) * measure.masses
            return VectorResult(scaled @ measure.locations)
        if weight.vector:
            return ma_integrate_vec(v, weight)
        return ma_integrate(v, weight)
    value, error = grid_integral(
        v, _hess_integrand(weight, j, factor), support_radius=weight.support_radius, smooth=smooth
    )
    return _vector(value, error, smooth) if vector_out else _scalar(value, error, smooth)


def general_simple_valuation(
    v: Union[ConvexFunction, DualCellComplex],
    psi: Weight,
    zeta: Optional[Weight] = None,
    *,
    smooth: bool = False,
) -> VectorResult:
    """
    ``int psi dMA(v) + int zeta(x) y dTheta_0(v)``: the general continuous,
    dually translation covariant, simple vector valuation.
    """
    first = ma_integrate_vec(v, psi, smooth=smooth)
    if zeta is None:
        return first
    second = theta0_integrate(v, zeta, smooth=smooth)
    return VectorResult(
        first.value + second.value,
        error_estimate=first.error_estimate + second.error_estimate,
        pathway=first.pathway,
        mollified=smooth,
    )
