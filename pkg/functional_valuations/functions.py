"""
The two representations of finite convex functions.

``MaxAffineFunction`` is the exact pathway: ``v(x) = max_i <a_i, x> + b_i``
kept in canonical form (distinct slopes, every piece active on an open set).
``GridFunction`` is the quadrature pathway: dense samples on a regular box
grid in row-major axis order, interpolated multilinearly.
"""

import itertools
import logging
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .polytope import Polytope, check_dim
from .subdivision import active_pieces, lower_faces, merge_coincident
from .type_utils import ArrayLike, FloatArray, as_float_array, frozen
from .valuation_error import ConvexityError, DomainError

logger = logging.getLogger(__name__)

PointFunction = Callable[[FloatArray], FloatArray]
"""Vectorized function: ``(N, n)`` points to ``(N,)`` values."""

DEFAULT_CONVEXITY_TOL = 1e-9
_BOX_SLACK = 1e-12


def _as_points(points: ArrayLike, dim: int) -> FloatArray:
    pts = as_float_array(points)
    if pts.ndim <= 1:
        pts = pts.reshape(-1, dim)
    if pts.shape[-1] != dim:
        raise DomainError(
            "point length does not match dimension",
            detail={"dim": dim, "point_len": pts.shape[-1]},
        )
    return pts


class MaxAffineFunction:
    """
    Piecewise-linear convex function ``max_i <a_i, x> + b_i``.

    Attributes:
        dim: ambient dimension n
        slopes: ``(m, n)`` array of slopes ``a_i``, lexicographically sorted
        offsets: ``(m,)`` array of offsets ``b_i``
    """

    dim: int
    slopes: FloatArray
    offsets: FloatArray

    def __init__(
        self, slopes: ArrayLike, offsets: ArrayLike, *, canonicalize: bool = True
    ) -> None:
        a = np.atleast_2d(as_float_array(slopes))
        b = as_float_array(offsets).ravel()
        if len(a) == 0:
            raise DomainError("a max-affine function needs at least one piece")
        if len(a) != len(b):
            raise DomainError(
                "slope and offset counts differ",
                detail={"slopes": len(a), "offsets": len(b)},
            )
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DomainError("pieces must be finite")
        self.dim = check_dim(a.shape[1])
        if canonicalize:
            a, b = merge_coincident(a, b)
            keep = active_pieces(lower_faces(a, b))
            a, b = a[keep], b[keep]
        self.slopes = frozen(a)
        self.offsets = frozen(b)

    @classmethod
    def from_pieces(
        cls, pieces: Sequence[Tuple[ArrayLike, float]]
    ) -> "MaxAffineFunction":
        slopes = [np.atleast_1d(as_float_array(a)) for a, _ in pieces]
        return cls(np.array(slopes), [float(b) for _, b in pieces])

    @property
    def pieces(self) -> List[Tuple[FloatArray, float]]:
        return [(a.copy(), float(b)) for a, b in zip(self.slopes, self.offsets)]

    def __len__(self) -> int:
        return len(self.offsets)

    def __repr__(self) -> str:
        return f"MaxAffineFunction(dim={self.dim}, pieces={len(self)})"

    def __call__(self, points: ArrayLike) -> FloatArray:
        pts = _as_points(points, self.dim)
        values: FloatArray = np.max(pts @ self.slopes.T + self.offsets, axis=-1)
        return values

    def plus(self, other: "MaxAffineFunction") -> "MaxAffineFunction":
        """Pointwise sum: the pieces are all pairwise sums."""
        slopes = (self.slopes[:, None, :] + other.slopes[None, :, :]).reshape(-1, self.dim)
        offsets = (self.offsets[:, None] + other.offsets[None, :]).ravel()
        return MaxAffineFunction(slopes, offsets)

    def maximum(self, other: "MaxAffineFunction") -> "MaxAffineFunction":
        """Pointwise maximum: the union of the pieces."""
        return MaxAffineFunction(
            np.vstack([self.slopes, other.slopes]),
            np.concatenate([self.offsets, other.offsets]),
        )

    def slope_hull(self) -> Polytope:
        """``conv{a_i}``, the domain of the conjugate."""
        return Polytope(self.slopes, dim=self.dim)


def support_function(body: Polytope) -> MaxAffineFunction:
    """``h_K(x) = max_{y in K} <x, y>`` as the max over the vertices of K."""
    return MaxAffineFunction(body.vertices, np.zeros(len(body.vertices)))


def _second_difference_directions(dim: int) -> Iterator[Tuple[int, ...]]:
    """Axis directions plus both diagonals of every 2D coordinate slice."""
    for axis in range(dim):
        yield tuple(1 if i == axis else 0 for i in range(dim))
    for i, j in itertools.combinations(range(dim), 2):
        for sign in (1, -1):
            yield tuple(1 if k == i else sign if k == j else 0 for k in range(dim))


def _shifted(values: FloatArray, direction: Sequence[int], step: int) -> FloatArray:
    index = tuple(
        slice(1 + step * d, values.shape[axis] - 1 + step * d) if d else slice(None)
        for axis, d in enumerate(direction)
    )
    return values[index]


def min_second_difference(values: FloatArray) -> float:
    """Smallest second difference over axis and 2D-diagonal directions."""
    worst = np.inf
    for direction in _second_difference_directions(values.ndim):
        diff = (
            _shifted(values, direction, 1)
            - 2.0 * _shifted(values, direction, 0)
            + _shifted(values, direction, -1)
        )
        if diff.size:
            worst = min(worst, float(diff.min()))
    return float(worst)


def is_discretely_convex(values: ArrayLike, *, tol: float = DEFAULT_CONVEXITY_TOL) -> bool:
    """
    Discrete convexity test on grid samples.

    Accepts when every second difference is at least ``-tol * max|values|``.
    """
    arr = as_float_array(values)
    scale = float(np.abs(arr).max(initial=0.0))
    return min_second_difference(arr) >= -tol * scale


class GridFunction:
    """
    Samples of a finite convex function on a regular box grid.

    Attributes:
        dim: ambient dimension n
        lower: per-axis lower box bounds
        upper: per-axis upper box bounds
        resolution: per-axis sample counts (each at least 3)
        values: samples of shape ``resolution``, row-major in the axes
        source: the vectorized function the samples were taken from, if known;
            transforms that need off-grid values resample it exactly
    """

    dim: int
    lower: FloatArray
    upper: FloatArray
    resolution: Tuple[int, ...]
    values: FloatArray
    source: Optional[PointFunction]

    def __init__(
        self,
        values: ArrayLike,
        *,
        lower: ArrayLike,
        upper: ArrayLike,
        source: Optional[PointFunction] = None,
        validate: bool = True,
        convexity_tol: float = DEFAULT_CONVEXITY_TOL,
    ) -> None:
        vals = as_float_array(values)
        self.dim = check_dim(vals.ndim)
        self.lower = frozen(as_float_array(lower).reshape(self.dim))
        self.upper = frozen(as_float_array(upper).reshape(self.dim))
        self.resolution = tuple(int(s) for s in vals.shape)
        if min(self.resolution) < 3:
            raise DomainError(
                "every axis needs at least 3 samples",
                detail={"resolution": self.resolution},
            )
        if np.any(self.upper <= self.lower):
            raise DomainError(
                "box bounds must satisfy lower < upper",
                detail={"lower": self.lower.tolist(), "upper": self.upper.tolist()},
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid samples must be finite")
        if validate and not is_discretely_convex(vals, tol=convexity_tol):
            raise ConvexityError(
                "samples are not discretely convex",
                detail={"min_second_difference": min_second_difference(vals)},
            )
        self.values = frozen(vals)
        self.source = source
        self._interpolator: Optional[RegularGridInterpolator] = None

    @classmethod
    def sample(
        cls,
        func: PointFunction,
        *,
        lower: ArrayLike,
        upper: ArrayLike,
        resolution: Union[int, Sequence[int]],
        validate: bool = True,
    ) -> "GridFunction":
        """Sample ``func`` at the nodes of the box grid and keep it as source."""
        lo = np.atleast_1d(as_float_array(lower))
        hi = np.atleast_1d(as_float_array(upper))
        dim = check_dim(len(lo))
        res = (resolution,) * dim if isinstance(resolution, int) else tuple(resolution)
        axes = [np.linspace(lo[i], hi[i], res[i]) for i in range(dim)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        values = np.asarray(func(mesh.reshape(-1, dim))).reshape(res)
        return cls(values, lower=lo, upper=hi, source=func, validate=validate)

    def __repr__(self) -> str:
        return f"GridFunction(dim={self.dim}, resolution={self.resolution})"

    @property
    def spacing(self) -> FloatArray:
        return (self.upper - self.lower) / (np.array(self.resolution) - 1)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def axes(self) -> List[FloatArray]:
        return [
            np.linspace(self.lower[i], self.upper[i], self.resolution[i])
            for i in range(self.dim)
        ]

    def nodes(self) -> FloatArray:
        """All grid nodes as an ``(N, n)`` array in row-major order."""
        mesh = np.stack(np.meshgrid(*self.axes, indexing="ij"), axis=-1)
        return mesh.reshape(-1, self.dim)

    def contains(self, points: ArrayLike) -> np.ndarray:
        pts = _as_points(points, self.dim)
        slack = _BOX_SLACK * (1.0 + np.abs(self.upper - self.lower))
        return np.all((pts >= self.lower - slack) & (pts <= self.upper + slack), axis=-1)

    def __call__(self, points: ArrayLike) -> FloatArray:
        """Multilinear interpolation; points outside the box raise ``DomainError``."""
        pts = _as_points(points, self.dim)
        inside = self.contains(pts)
        if not np.all(inside):
            raise DomainError(
                "query outside the grid box",
                detail={"point": pts[~inside][0].tolist()},
            )
        if self._interpolator is None:
            self._interpolator = RegularGridInterpolator(
                self.axes, self.values, method="linear"
            )
        clipped = np.clip(pts, self.lower, self.upper)
        result: FloatArray = self._interpolator(clipped)
        return result

    def with_values(
        self,
        values: ArrayLike,
        *,
        lower: Optional[ArrayLike] = None,
        upper: Optional[ArrayLike] = None,
        source: Optional[PointFunction] = None,
        validate: bool = True,
    ) -> "GridFunction":
        return GridFunction(
            values,
            lower=self.lower if lower is None else lower,
            upper=self.upper if upper is None else upper,
            source=source,
            validate=validate,
        )

    def resample(self, func: PointFunction, *, validate: bool = True) -> "GridFunction":
        """Samples of ``func`` on this grid, with ``func`` kept as source."""
        values = np.asarray(func(self.nodes())).reshape(self.resolution)
        return self.with_values(values, source=func, validate=validate)


ConvexFunction = Union[MaxAffineFunction, GridFunction]


def evaluate(function: ConvexFunction, x: ArrayLike) -> float:
    """Value at a single point: exact for max-affine, interpolated on grids."""
    return float(function(np.atleast_1d(as_float_array(x)).reshape(1, -1))[0])


def sample_grid(
    func: PointFunction,
    *,
    lower: ArrayLike,
    upper: ArrayLike,
    resolution: Union[int, Sequence[int]],
    validate: bool = True,
) -> GridFunction:
    return GridFunction.sample(
        func, lower=lower, upper=upper, resolution=resolution, validate=validate
    )


def symmetric_box(dim: int, half_width: float) -> Tuple[FloatArray, FloatArray]:
    """The box ``[-half_width, half_width]^dim``."""
    return -half_width * np.ones(dim), half_width * np.ones(dim)


def quadratic(points: FloatArray) -> FloatArray:
    """``q(x) = |x|^2 / 2``."""
    result: FloatArray = 0.5 * np.sum(points * points, axis=-1)
    return result
