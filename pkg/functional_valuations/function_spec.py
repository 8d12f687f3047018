"""
Declarative function specs for the command line.

A spec is a small JSON vocabulary: quadratics, linear shifts, max-affine piece
lists, support functions of polytopes, radial powers and sums of those.
Piecewise linear specs build exact ``MaxAffineFunction`` objects; anything
else is sampled on a grid.
"""

import logging
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from typing_extensions import Annotated, Literal

from .functions import (
    ConvexFunction,
    MaxAffineFunction,
    PointFunction,
    sample_grid,
    support_function,
    symmetric_box,
)
from .polytope import Polytope, check_dim
from .type_utils import FloatArray, as_float_array
from .valuation_error import DomainError, UnsupportedRepresentationError

logger = logging.getLogger(__name__)

Representation = Literal["auto", "exact", "grid"]


def _vector(values: List[float], dim: int, name: str) -> FloatArray:
    array = as_float_array(values)
    if array.shape != (dim,):
        raise DomainError(f"{name} does not match the dimension", detail={"dim": dim, name: values})
    return array


class _Term(BaseModel):
    model_config = ConfigDict(extra="forbid")

    def exact(self, dim: int) -> Optional[MaxAffineFunction]:
        """The max-affine form, or None when the term is not piecewise linear."""
        return None

    def pointwise(self, dim: int) -> PointFunction:
        raise NotImplementedError


class QuadraticTerm(_Term):
    """``coefficient |x - center|^2 / 2``."""

    kind: Literal["quadratic"]
    coefficient: float = Field(1.0, ge=0.0)
    center: Optional[List[float]] = None

    def pointwise(self, dim: int) -> PointFunction:
        center = np.zeros(dim) if self.center is None else _vector(self.center, dim, "center")
        c = self.coefficient

        def func(points: FloatArray) -> FloatArray:
            shifted = points - center
            result: FloatArray = 0.5 * c * np.sum(shifted * shifted, axis=-1)
            return result

        return func


class LinearTerm(_Term):
    """``<slope, x> + offset``."""

    kind: Literal["linear"]
    slope: List[float]
    offset: float = 0.0

    def exact(self, dim: int) -> MaxAffineFunction:
        return MaxAffineFunction([_vector(self.slope, dim, "slope")], [self.offset])

    def pointwise(self, dim: int) -> PointFunction:
        return self.exact(dim)


class MaxAffineTerm(_Term):
    """``max_i <slopes[i], x> + offsets[i]``."""

    kind: Literal["max_affine"]
    slopes: List[List[float]]
    offsets: List[float]

    def exact(self, dim: int) -> MaxAffineFunction:
        slopes = np.array([_vector(s, dim, "slope") for s in self.slopes])
        if len(self.offsets) != len(slopes):
            raise DomainError(
                "need one offset per slope",
                detail={"slopes": len(slopes), "offsets": len(self.offsets)},
            )
        return MaxAffineFunction(slopes, self.offsets)

    def pointwise(self, dim: int) -> PointFunction:
        return self.exact(dim)


class SupportTerm(_Term):
    """Support function of the hull of ``vertices``."""

    kind: Literal["support"]
    vertices: List[List[float]]

    def exact(self, dim: int) -> MaxAffineFunction:
        points = np.array([_vector(p, dim, "vertex") for p in self.vertices])
        return support_function(Polytope(points, dim=dim))

    def pointwise(self, dim: int) -> PointFunction:
        return self.exact(dim)


class RadialPowerTerm(_Term):
    """``coefficient |x|^power`` with ``power >= 1``."""

    kind: Literal["radial_power"]
    power: float = Field(ge=1.0)
    coefficient: float = Field(1.0, ge=0.0)

    def pointwise(self, dim: int) -> PointFunction:
        p, c = self.power, self.coefficient

        def func(points: FloatArray) -> FloatArray:
            result: FloatArray = c * np.linalg.norm(points, axis=-1) ** p
            return result

        return func


class SumTerm(_Term):
    kind: Literal["sum"]
    terms: List["Term"] = Field(min_length=1)

    def exact(self, dim: int) -> Optional[MaxAffineFunction]:
        parts = [t.exact(dim) for t in self.terms]
        if any(p is None for p in parts):
            return None
        total = parts[0]
        assert total is not None
        for part in parts[1:]:
            assert part is not None
            total = total.plus(part)
        return total

    def pointwise(self, dim: int) -> PointFunction:
        funcs = [t.pointwise(dim) for t in self.terms]

        def func(points: FloatArray) -> FloatArray:
            result: FloatArray = np.sum([f(points) for f in funcs], axis=0)
            return result

        return func


Term = Annotated[
    Union[QuadraticTerm, LinearTerm, MaxAffineTerm, SupportTerm, RadialPowerTerm, SumTerm],
    Field(discriminator="kind"),
]
SumTerm.model_rebuild()


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    half_width: float = Field(2.0, gt=0.0)
    resolution: int = Field(129, ge=3)


class FunctionSpec(BaseModel):
    """
    A function document::

        {"dim": 1, "function": {"kind": "quadratic", "center": [1.0]}}
    """

    model_config = ConfigDict(extra="forbid")

    dim: int
    function: Term
    representation: Representation = "auto"
    grid: GridSpec = Field(default_factory=GridSpec)


def build_function(spec: FunctionSpec) -> ConvexFunction:
    """The ``MaxAffineFunction`` or ``GridFunction`` that ``spec`` describes."""
    dim = check_dim(spec.dim)
    exact = None if spec.representation == "grid" else spec.function.exact(dim)
    if exact is not None:
        logger.debug("built exact function with %d pieces", len(exact))
        return exact
    if spec.representation == "exact":
        raise UnsupportedRepresentationError(
            "function is not piecewise linear", detail={"kind": spec.function.kind}
        )
    lower, upper = symmetric_box(dim, spec.grid.half_width)
    return sample_grid(
        spec.function.pointwise(dim), lower=lower, upper=upper, resolution=spec.grid.resolution
    )
