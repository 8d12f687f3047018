"""
Seeded generators of structured inputs for the property suites.

Every generator draws from a ``numpy.random.Generator`` passed in by the
caller, so a suite that creates its inputs in a fixed order from one seed
is reproducible bit for bit.
"""

import logging
from typing import Callable, List, Tuple

import numpy as np
from typing_extensions import Literal

from .functions import (
    ConvexFunction,
    GridFunction,
    MaxAffineFunction,
    PointFunction,
    is_discretely_convex,
    min_second_difference,
    sample_grid,
    symmetric_box,
)
from .polytope import Polytope, check_dim
from .type_utils import ArrayLike, FloatArray, as_float_array
from .valuation_error import ConvexityError

logger = logging.getLogger(__name__)

Representation = Literal["exact", "grid"]
Witness = Literal["hinge", "dominated"]

_VALIDATION_NODES = 17


class ValidPair:
    """
    Two convex functions whose pointwise max and min are convex, together with
    that max (``join``) and min (``meet``) in the same representation.
    """

    v: ConvexFunction
    w: ConvexFunction
    join: ConvexFunction
    meet: ConvexFunction
    witness: Witness

    def __init__(
        self,
        *,
        v: ConvexFunction,
        w: ConvexFunction,
        join: ConvexFunction,
        meet: ConvexFunction,
        witness: Witness,
    ) -> None:
        self.v = v
        self.w = w
        self.join = join
        self.meet = meet
        self.witness = witness

    def __repr__(self) -> str:
        return f"ValidPair({self.witness}, {self.v!r})"


def random_rotation(rng: np.random.Generator, dim: int, *, proper: bool = True) -> FloatArray:
    """Haar-distributed element of SO(n), or of O(n) minus SO(n) when not proper."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    if (np.linalg.det(q) > 0) != proper:
        q[:, 0] = -q[:, 0]
    return q


def random_polytope(
    rng: np.random.Generator, dim: int, *, points: int = 8, spread: float = 1.0
) -> Polytope:
    """Hull of uniform points in ``[-spread, spread]^n``; full-dimensional."""
    check_dim(dim)
    while True:
        body = Polytope(rng.uniform(-spread, spread, size=(max(points, dim + 1), dim)))
        if body.is_full_dimensional and body.volume() > 1e-3 * spread**dim:
            return body


def random_max_affine(
    rng: np.random.Generator, dim: int, *, pieces: int = 6, scale: float = 1.0
) -> MaxAffineFunction:
    """Random slopes in ``[-scale, scale]^n`` (full-dimensional hull) and offsets."""
    while True:
        slopes = rng.uniform(-scale, scale, size=(max(pieces, dim + 1), dim))
        offsets = rng.uniform(-0.5, 0.5, size=len(slopes))
        v = MaxAffineFunction(slopes, offsets)
        if v.slope_hull().is_full_dimensional:
            return v


def random_quadratic(rng: np.random.Generator, dim: int) -> Tuple[FloatArray, FloatArray]:
    """Positive definite ``A`` (eigenvalues in [0.5, 1.5]) and a linear term ``c``."""
    q = random_rotation(rng, dim)
    a = q @ np.diag(rng.uniform(0.5, 1.5, size=dim)) @ q.T
    c = rng.uniform(-0.5, 0.5, size=dim)
    return a, c


def quadratic_function(a: ArrayLike, c: ArrayLike, cubic: float = 0.0) -> PointFunction:
    """``x -> x.A x / 2 + <c, x> + cubic (x_1 + 1)^3``."""
    mat = as_float_array(a)
    lin = as_float_array(c)

    def func(points: FloatArray) -> FloatArray:
        result: FloatArray = 0.5 * np.einsum("ni,ij,nj->n", points, mat, points) + points @ lin
        if cubic:
            result = result + cubic * (points[:, 0] + 1.0) ** 3
        return result

    return func


def random_smooth(
    rng: np.random.Generator, dim: int, *, asymmetric: bool = False
) -> PointFunction:
    """Random strictly convex smooth function on ``[-2, 2]^n``."""
    a, c = random_quadratic(rng, dim)
    cubic = float(rng.uniform(0.02, 0.05)) if asymmetric else 0.0
    return quadratic_function(a, c, cubic)


def simple_function(
    rng: np.random.Generator, dim: int
) -> Tuple[PointFunction, FloatArray]:
    """``x -> g(x_1) + <y, x>`` (just ``<y, x> + c`` in one dimension), and ``y``."""
    y = rng.uniform(-0.5, 0.5, size=dim)
    curvature = float(rng.uniform(0.5, 1.5))
    quartic = float(rng.uniform(0.0, 0.1))
    shift = float(rng.uniform(-1.0, 1.0))

    def func(points: FloatArray) -> FloatArray:
        linear: FloatArray = points @ y
        if dim == 1:
            return linear + shift
        t = points[:, 0]
        result: FloatArray = 0.5 * curvature * t**2 + quartic * t**4 + linear
        return result

    return func, y


def simple_max_affine(rng: np.random.Generator, dim: int) -> MaxAffineFunction:
    """
    Max-affine function of ``x_1`` only, plus a linear term; in one dimension
    a single affine piece.
    """
    y = rng.uniform(-0.5, 0.5, size=dim)
    if dim == 1:
        return MaxAffineFunction(y[None, :], [float(rng.uniform(-0.5, 0.5))])
    e1 = np.eye(dim)[0]
    slopes = np.array([s * e1 + y for s in rng.uniform(-1.0, 1.0, size=4)])
    return MaxAffineFunction(slopes, rng.uniform(-0.5, 0.5, size=4))


def hinge(direction: ArrayLike, anchor: ArrayLike) -> MaxAffineFunction:
    """``x -> max(0, <e, x - p>)``."""
    e = as_float_array(direction)
    p = as_float_array(anchor)
    return MaxAffineFunction(np.vstack([np.zeros_like(e), e]), [0.0, -float(e @ p)])


def hinge_pair(
    direction: ArrayLike, anchor: ArrayLike, base: MaxAffineFunction
) -> ValidPair:
    """
    ``v = max(0, <e, x - p>) + g`` and ``w = max(0, -<e, x - p>) + g``:
    ``v`` or ``w`` is ``|<e, x - p>| + g`` and ``v`` and ``w`` is ``g``.
    """
    e = as_float_array(direction)
    v = base.plus(hinge(e, anchor))
    w = base.plus(hinge(-e, anchor))
    return ValidPair(v=v, w=w, join=v.maximum(w), meet=base, witness="hinge")


def _grid_hinge_pair(
    rng: np.random.Generator, dim: int, lower: FloatArray, upper: FloatArray, resolution: int
) -> ValidPair:
    """Hinge along a coordinate axis through a grid node, over a smooth base."""
    base = random_smooth(rng, dim)
    axis = int(rng.integers(dim))
    nodes = np.linspace(lower[axis], upper[axis], resolution)
    inner = nodes[resolution // 4 : resolution - resolution // 4]
    offset = float(inner[rng.integers(len(inner))])
    slope = float(rng.uniform(0.5, 1.5)) * float(rng.choice([-1.0, 1.0]))

    def part(sign: float) -> Callable[[FloatArray], FloatArray]:
        def func(points: FloatArray) -> FloatArray:
            return base(points) + np.maximum(0.0, sign * slope * (points[:, axis] - offset))

        return func

    def meet_func(points: FloatArray) -> FloatArray:
        return base(points)

    def join_func(points: FloatArray) -> FloatArray:
        return base(points) + np.abs(slope * (points[:, axis] - offset))

    def grid(func: PointFunction) -> GridFunction:
        return sample_grid(func, lower=lower, upper=upper, resolution=resolution)

    v, w = grid(part(1.0)), grid(part(-1.0))
    return ValidPair(
        v=v,
        w=w,
        join=v.with_values(np.maximum(v.values, w.values), source=join_func),
        meet=v.with_values(np.minimum(v.values, w.values), source=meet_func),
        witness="hinge",
    )


def _check_pair(pair: ValidPair, lower: FloatArray, upper: FloatArray) -> None:
    for name in ("join", "meet"):
        f = getattr(pair, name)
        if isinstance(f, MaxAffineFunction):
            f = sample_grid(
                f, lower=lower, upper=upper, resolution=_VALIDATION_NODES, validate=False
            )
        if not is_discretely_convex(f.values):
            raise ConvexityError(
                f"generated pair has a non-convex {name}",
                detail={"min_second_difference": min_second_difference(f.values)},
            )


def gen_valid_pairs(
    seed: int,
    count: int,
    dim: int,
    representation: Representation,
    *,
    box_half_width: float = 2.0,
    resolution: int = 65,
) -> List[ValidPair]:
    """
    ``count`` constructed valid pairs; every fifth pair is a dominated pair
    ``(g, g + c)``, the rest are hinge pairs over a common base ``g``.

    Exact pairs use random hinge directions and random max-affine bases;
    grid pairs hinge along a coordinate axis through a grid node over a
    smooth base. Join and meet of every pair are run through the convexity
    validator.
    """
    check_dim(dim)
    rng = np.random.default_rng(seed)
    lower, upper = symmetric_box(dim, box_half_width)
    pairs: List[ValidPair] = []
    for index in range(count):
        dominated = index % 5 == 4
        if representation == "exact":
            base = random_max_affine(rng, dim)
            if dominated:
                lifted = MaxAffineFunction(base.slopes, base.offsets + rng.uniform(0.1, 1.0))
                pair = ValidPair(v=base, w=lifted, join=lifted, meet=base, witness="dominated")
            else:
                direction = rng.standard_normal(dim)
                anchor = rng.uniform(-0.5, 0.5, size=dim)
                pair = hinge_pair(direction, anchor, base)
        elif dominated:
            smooth = random_smooth(rng, dim)
            shift = float(rng.uniform(0.1, 1.0))
            v = sample_grid(smooth, lower=lower, upper=upper, resolution=resolution)
            w = v.with_values(v.values + shift, source=lambda p, f=smooth, c=shift: f(p) + c)
            pair = ValidPair(v=v, w=w, join=w, meet=v, witness="dominated")
        else:
            pair = _grid_hinge_pair(rng, dim, lower, upper, resolution)
        _check_pair(pair, lower, upper)
        pairs.append(pair)
    logger.debug("generated %d %s pairs in dimension %d", count, representation, dim)
    return pairs
