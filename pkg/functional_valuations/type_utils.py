from typing import (
    Union,
)

import numpy as np
import numpy.typing as npt
from typing_extensions import (
    Literal,
    TypeVar,
    override,
)

_T = TypeVar("_T")

FloatArray = npt.NDArray[np.float64]
"""Real vectors, point clouds and sample arrays."""

ArrayLike = npt.ArrayLike

Pathway = Literal["exact", "grid"]


class Derived:
    """
    Default for grid settings computed from the input, such as the dual box
    and resolution of ``conjugate_grid``. Falsy and distinct from None.
    """

    def __bool__(self) -> Literal[False]:
        return False

    @override
    def __repr__(self) -> str:
        return "DERIVED"


DerivedOr = Union[_T, Derived]
DERIVED = Derived()


def as_float_array(value: ArrayLike) -> FloatArray:
    """Copy ``value`` into a fresh C-contiguous float64 array."""
    return np.array(value, dtype=np.float64, copy=True, order="C")


def frozen(array: FloatArray) -> FloatArray:
    """Mark an array read-only and return it."""
    array.flags.writeable = False
    return array
