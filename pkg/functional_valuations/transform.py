"""
Legendre-Fenchel conjugation and the epi-algebra on both representations.

The conjugate of a max-affine ``v`` is a ``DualCellComplex``: the regular
subdivision of ``conv{a_i}`` read off the lower hull of the lifted points
``(a_i, -b_i)``, each cell carrying the primal point ``x_k`` where the
pieces of the cell are active. On the cell ``C_k`` the conjugate is the
affine function ``y -> <x_k, y> - v(x_k)``.

Grid conjugation is the discrete transform ``max_i <x_i, y> - f(x_i)``
computed one axis at a time with a lower-hull scan per grid line.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .functions import ConvexFunction, GridFunction, MaxAffineFunction, PointFunction, quadratic
from .polytope import Polytope
from .subdivision import lower_faces
from .type_utils import (
    DERIVED,
    ArrayLike,
    Derived,
    DerivedOr,
    FloatArray,
    as_float_array,
    frozen,
)
from .valuation_error import (
    ArgumentError,
    ClippingError,
    DomainError,
    UnsupportedRepresentationError,
)

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOL = 1e-9
_CLIP_TOL = 1e-9


class DualCell:
    """
    One cell ``C_k`` of a dual complex and the primal point ``x_k`` with
    ``C_k`` equal to the subdifferential of the primal function at ``x_k``.
    """

    gradient: FloatArray
    cell: Polytope
    value: float

    def __init__(self, gradient: ArrayLike, cell: Polytope, value: float = 0.0) -> None:
        self.gradient = frozen(np.atleast_1d(as_float_array(gradient)))
        self.cell = cell
        self.value = float(value)
        self._volume: Optional[float] = None
        self._moment: Optional[FloatArray] = None

    def __repr__(self) -> str:
        return f"DualCell(gradient={self.gradient.tolist()}, volume={self.volume:.6g})"

    @property
    def volume(self) -> float:
        if self._volume is None:
            self._volume = self.cell.volume()
        return self._volume

    @property
    def moment(self) -> FloatArray:
        if self._moment is None:
            self._moment = frozen(self.cell.moment_vector())
        return self._moment

    def affine(self, points: FloatArray) -> FloatArray:
        """The conjugate restricted to this cell, extended affinely."""
        result: FloatArray = points @ self.gradient - self.value
        return result


class DualCellComplex:
    """
    Exact conjugate ``u = v*`` of a max-affine function.

    Attributes:
        dim: ambient dimension
        cells: cells with pairwise disjoint interiors covering ``domain``
        domain: ``conv{a_i}``, the effective domain of ``u``
    """

    dim: int
    cells: List[DualCell]
    domain: Polytope

    def __init__(self, cells: Sequence[DualCell], *, domain: Optional[Polytope] = None) -> None:
        if not cells:
            raise DomainError("a dual complex needs at least one cell")
        self.cells = list(cells)
        self.dim = self.cells[0].cell.dim
        if domain is None:
            domain = Polytope(np.vstack([c.cell.vertices for c in self.cells]), dim=self.dim)
        self.domain = domain

    def __repr__(self) -> str:
        return f"DualCellComplex(dim={self.dim}, cells={len(self.cells)})"

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def gradients(self) -> FloatArray:
        return np.array([c.gradient for c in self.cells])

    @property
    def values(self) -> FloatArray:
        return np.array([c.value for c in self.cells])

    def total_volume(self) -> float:
        return float(sum(c.volume for c in self.cells))

    def _affine_values(self, points: FloatArray) -> FloatArray:
        result: FloatArray = points @ self.gradients.T - self.values
        return result

    def conjugate_value(self, points: ArrayLike) -> FloatArray:
        """``u(y)``; ``+inf`` off the domain."""
        pts = np.atleast_2d(as_float_array(points))
        values = np.max(self._affine_values(pts), axis=1)
        return np.where(self.domain.contains(pts, tol=1e-9), values, np.inf)

    def gradient_at(self, points: ArrayLike) -> FloatArray:
        """``grad u(y)``: the gradient point of the cell attaining the max."""
        pts = np.atleast_2d(as_float_array(points))
        index = np.argmax(self._affine_values(pts), axis=1)
        result: FloatArray = self.gradients[index]
        return result

    def pre_conjugate(self) -> MaxAffineFunction:
        """``u*``: one piece ``<., a> - u(a)`` per cell vertex ``a``."""
        slopes = []
        offsets = []
        for c in self.cells:
            for a in c.cell.vertices:
                slopes.append(a)
                offsets.append(c.value - float(a @ c.gradient))
        return MaxAffineFunction(np.array(slopes), np.array(offsets))

    def primal_value(self, points: ArrayLike) -> FloatArray:
        """Biconjugate reconstruction of the primal function."""
        pts = np.atleast_2d(as_float_array(points))
        best = np.full(len(pts), -np.inf)
        for c in self.cells:
            pieces = pts @ c.cell.vertices.T - (c.cell.vertices @ c.gradient - c.value)
            best = np.maximum(best, pieces.max(axis=1))
        return best

    def as_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "domain": self.domain.vertices.tolist(),
            "cells": [
                {
                    "vertices": c.cell.vertices.tolist(),
                    "gradient": c.gradient.tolist(),
                    "value": c.value,
                    "mass": c.volume,
                    "moment": c.moment.tolist(),
                }
                for c in self.cells
            ],
        }


def conjugate_max_affine(v: MaxAffineFunction) -> DualCellComplex:
    """Dual cell complex of ``v*`` from the lower hull of ``(a_i, -b_i)``."""
    faces = lower_faces(np.asarray(v.slopes), np.asarray(v.offsets))
    cells = [
        DualCell(face.gradient, Polytope(v.slopes[face.members], dim=v.dim), face.value)
        for face in faces
    ]
    logger.debug("conjugated %r into %d cells", v, len(cells))
    return DualCellComplex(cells, domain=v.slope_hull())


def _lower_hull(x: FloatArray, g: FloatArray) -> List[int]:
    """Monotone-chain lower hull of ``(x_i, g_i)`` with ``x`` increasing."""
    hull: List[int] = []
    for i in range(len(x)):
        while len(hull) > 1:
            p, q = hull[-2], hull[-1]
            cross = (x[q] - x[p]) * (g[i] - g[p]) - (x[i] - x[p]) * (g[q] - g[p])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _conjugate_lines(x: FloatArray, lines: FloatArray, y: FloatArray) -> FloatArray:
    """Discrete conjugate ``max_i x_i y - g_i`` of every row of ``lines``."""
    out = np.empty((lines.shape[0], len(y)))
    for row, g in enumerate(lines):
        hull = np.array(_lower_hull(x, g))
        hx, hg = x[hull], g[hull]
        breaks = np.diff(hg) / np.diff(hx)
        best = np.searchsorted(breaks, y, side="left")
        out[row] = hx[best] * y - hg[best]
    return out


def brute_force_conjugate(f: GridFunction, dual: Sequence[FloatArray]) -> FloatArray:
    """``max`` over every node, evaluated on the product grid ``dual``."""
    mesh = np.stack(np.meshgrid(*dual, indexing="ij"), axis=-1).reshape(-1, f.dim)
    nodes = f.nodes()
    values = f.values.reshape(-1)
    result = np.max(mesh @ nodes.T - values[None, :], axis=1)
    return result.reshape(tuple(len(axis) for axis in dual))


def gradient_range(f: GridFunction) -> Tuple[FloatArray, FloatArray]:
    """Per-axis min and max of the forward-difference slopes."""
    lo = np.empty(f.dim)
    hi = np.empty(f.dim)
    for axis in range(f.dim):
        slopes = np.diff(f.values, axis=axis) / f.spacing[axis]
        lo[axis], hi[axis] = slopes.min(), slopes.max()
    return lo, hi


def conjugate_grid(
    f: GridFunction,
    *,
    lower: DerivedOr[ArrayLike] = DERIVED,
    upper: DerivedOr[ArrayLike] = DERIVED,
    resolution: DerivedOr[Union[int, Sequence[int]]] = DERIVED,
    validate: bool = True,
) -> GridFunction:
    """
    Samples of ``f*`` on a dual box.

    The dual box defaults to the gradient range of ``f`` (padded by 1 on
    axes where the range is a single slope); a requested box that does not
    contain the gradient range raises ``ClippingError``.
    """
    slope_lo, slope_hi = gradient_range(f)
    if isinstance(lower, Derived) or isinstance(upper, Derived):
        flat = slope_hi - slope_lo <= _CLIP_TOL * (1.0 + np.abs(slope_hi))
        dual_lo = np.where(flat, slope_lo - 1.0, slope_lo)
        dual_hi = np.where(flat, slope_hi + 1.0, slope_hi)
    else:
        dual_lo = np.atleast_1d(as_float_array(lower))
        dual_hi = np.atleast_1d(as_float_array(upper))
        slack = _CLIP_TOL * (1.0 + np.abs(slope_lo) + np.abs(slope_hi))
        if np.any(dual_lo > slope_lo + slack) or np.any(dual_hi < slope_hi - slack):
            raise ClippingError(
                "gradient range exceeds the requested dual box",
                detail={
                    "gradient_lower": slope_lo.tolist(),
                    "gradient_upper": slope_hi.tolist(),
                    "box_lower": dual_lo.tolist(),
                    "box_upper": dual_hi.tolist(),
                },
            )
    if isinstance(resolution, Derived):
        res = f.resolution
    elif isinstance(resolution, int):
        res = (resolution,) * f.dim
    else:
        res = tuple(resolution)
    dual_axes = [np.linspace(dual_lo[i], dual_hi[i], res[i]) for i in range(f.dim)]
    primal_axes = f.axes

    g = np.array(f.values)
    for step, axis in enumerate(reversed(range(f.dim))):
        if step:
            g = -g
        moved = np.moveaxis(g, axis, -1)
        shape = moved.shape[:-1]
        lines = moved.reshape(-1, moved.shape[-1])
        conj = _conjugate_lines(primal_axes[axis], lines, dual_axes[axis])
        g = np.moveaxis(conj.reshape(shape + (res[axis],)), -1, axis)
    logger.debug("grid conjugate of %r onto %s nodes", f, res)
    return GridFunction(g, lower=dual_lo, upper=dual_hi, validate=validate)


def epi_multiply(
    u: Union[MaxAffineFunction, DualCellComplex, GridFunction], lam: float
) -> Union[MaxAffineFunction, DualCellComplex, GridFunction]:
    """``(lam . u)(x) = lam u(x / lam)`` in the representation of ``u``."""
    if not lam > 0.0:
        raise ArgumentError("epi-multiplication needs lambda > 0", detail={"lambda": lam})
    if isinstance(u, MaxAffineFunction):
        return MaxAffineFunction(u.slopes, lam * u.offsets)
    if isinstance(u, DualCellComplex):
        cells = [DualCell(c.gradient, c.cell.scale(lam), lam * c.value) for c in u.cells]
        return DualCellComplex(cells, domain=u.domain.scale(lam))
    return GridFunction(
        lam * u.values,
        lower=lam * u.lower,
        upper=lam * u.upper,
        source=None if u.source is None else _epi_source(u.source, lam),
    )


def _epi_source(source: PointFunction, lam: float) -> PointFunction:
    def scaled(points: FloatArray) -> FloatArray:
        return lam * source(points / lam)

    return scaled


def rotate_complex(u: DualCellComplex, matrix: ArrayLike) -> DualCellComplex:
    """``u o theta^-1``: cells and gradient points mapped by ``theta``."""
    theta = check_orthogonal(matrix, u.dim)
    cells = [DualCell(theta @ c.gradient, c.cell.rotate(theta), c.value) for c in u.cells]
    return DualCellComplex(cells, domain=u.domain.rotate(theta))


def check_orthogonal(matrix: ArrayLike, dim: int) -> FloatArray:
    theta = np.atleast_2d(as_float_array(matrix))
    if theta.shape != (dim, dim):
        raise ArgumentError("matrix shape does not match dimension", detail={"shape": theta.shape})
    error = float(np.abs(theta.T @ theta - np.eye(dim)).max())
    if error > ORTHOGONALITY_TOL:
        raise ArgumentError("matrix is not orthogonal", detail={"error": error})
    return theta


class Action:
    """
    One elementary transformation of a finite convex function.

    Build with the module-level helpers (``add_linear``, ``rotate`` ...)
    and apply with ``transform_fconvf``.
    """

    kind: str
    argument: Any

    def __init__(self, kind: str, argument: Any) -> None:
        self.kind = kind
        self.argument = argument

    def __repr__(self) -> str:
        return f"Action({self.kind}, {self.argument!r})"

    @property
    def proper(self) -> bool:
        """For rotations: whether the matrix has determinant +1."""
        if self.kind != "rotate":
            return True
        return bool(np.linalg.det(self.argument) > 0.0)


def add_linear(y: ArrayLike) -> Action:
    return Action("add_linear", np.atleast_1d(as_float_array(y)))


def add_constant(c: float) -> Action:
    return Action("add_constant", float(c))


def rotate(matrix: ArrayLike) -> Action:
    return Action("rotate", np.atleast_2d(as_float_array(matrix)))


def add_quadratic(r: float) -> Action:
    if r < 0.0:
        raise ArgumentError("quadratic coefficient must be >= 0", detail={"r": r})
    return Action("add_quadratic", float(r))


def scale(lam: float) -> Action:
    if not lam > 0.0:
        raise ArgumentError("scale factor must be positive", detail={"lambda": lam})
    return Action("scale", float(lam))


def translate(x0: ArrayLike) -> Action:
    """``v -> v(. - x0)``."""
    return Action("translate", np.atleast_1d(as_float_array(x0)))


def dilate(lam: float) -> Action:
    """``v -> v(. / lam)``."""
    if not lam > 0.0:
        raise ArgumentError("dilation factor must be positive", detail={"lambda": lam})
    return Action("dilate", float(lam))


def _check_vector(action: Action, dim: int) -> None:
    if action.argument.shape != (dim,):
        raise ArgumentError(
            "vector argument does not match dimension",
            detail={"action": action.kind, "dim": dim},
        )


def _transform_max_affine(v: MaxAffineFunction, action: Action) -> MaxAffineFunction:
    a, b = np.asarray(v.slopes), np.asarray(v.offsets)
    if action.kind == "add_linear":
        return MaxAffineFunction(a + action.argument, b)
    if action.kind == "add_constant":
        return MaxAffineFunction(a, b + action.argument)
    if action.kind == "rotate":
        theta = check_orthogonal(action.argument, v.dim)
        return MaxAffineFunction(a @ theta.T, b)
    if action.kind == "scale":
        return MaxAffineFunction(action.argument * a, action.argument * b)
    if action.kind == "translate":
        return MaxAffineFunction(a, b - a @ action.argument)
    if action.kind == "dilate":
        return MaxAffineFunction(a / action.argument, b)
    raise UnsupportedRepresentationError(
        "action is not available on max-affine functions (result is not piecewise linear)",
        detail={"action": action.kind},
    )


def _point_map(action: Action, dim: int) -> Optional[Callable[[FloatArray], FloatArray]]:
    """Preimage map for actions that precompose ``v`` with an affine map."""
    if action.kind == "rotate":
        theta = check_orthogonal(action.argument, dim)
        return lambda points: points @ theta
    if action.kind == "translate":
        return lambda points: points - action.argument
    if action.kind == "dilate":
        return lambda points: points / action.argument
    return None


def _transform_grid(v: GridFunction, action: Action) -> GridFunction:
    nodes = v.nodes()
    source = v.source
    pull = _point_map(action, v.dim)
    if pull is not None:
        if source is not None:
            src = source

            def moved(points: FloatArray) -> FloatArray:
                return src(pull(points))

            return v.resample(moved)
        values = v(pull(nodes)).reshape(v.resolution)
        return v.with_values(values)

    if action.kind == "add_linear":
        y = action.argument

        def extra(points: FloatArray) -> FloatArray:
            result: FloatArray = points @ y
            return result

    elif action.kind == "add_constant":
        c = action.argument

        def extra(points: FloatArray) -> FloatArray:
            return np.full(len(points), c)

    elif action.kind == "add_quadratic":
        r = action.argument

        def extra(points: FloatArray) -> FloatArray:
            return r * quadratic(points)

    elif action.kind == "scale":
        lam = action.argument
        values = lam * v.values
        scaled = None if source is None else (lambda points: lam * source(points))
        return v.with_values(values, source=scaled)
    else:
        raise ArgumentError("unknown action", detail={"action": action.kind})

    values = v.values + extra(nodes).reshape(v.resolution)
    combined = None if source is None else (lambda points: source(points) + extra(points))
    return v.with_values(values, source=combined)


def transform_fconvf(v: ConvexFunction, action: Action) -> ConvexFunction:
    """Apply ``action`` to ``v``, staying in the representation of ``v``."""
    if action.kind in ("add_linear", "translate"):
        _check_vector(action, v.dim)
    if isinstance(v, MaxAffineFunction):
        return _transform_max_affine(v, action)
    return _transform_grid(v, action)


def apply_actions(v: ConvexFunction, actions: Sequence[Action]) -> ConvexFunction:
    for action in actions:
        v = transform_fconvf(v, action)
    return v
