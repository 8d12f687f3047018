from typing import Any, Dict, Union

import numpy as np

from .type_utils import ArrayLike, FloatArray, Pathway, as_float_array, frozen


class VectorResult:
    """
    Vector value of an operator together with how it was obtained.

    ``error_estimate`` is 0 on the exact pathway and, on the grid pathway,
    the norm of the difference to the same quadrature at half resolution.
    """

    value: FloatArray
    error_estimate: float
    pathway: Pathway
    mollified: bool

    def __init__(
        self,
        value: ArrayLike,
        *,
        error_estimate: float = 0.0,
        pathway: Pathway = "exact",
        mollified: bool = False,
    ) -> None:
        self.value = frozen(np.atleast_1d(as_float_array(value)))
        self.error_estimate = abs(float(error_estimate))
        self.pathway = pathway
        self.mollified = mollified

    def __repr__(self) -> str:
        return (
            f"VectorResult(value={self.value.tolist()}, "
            f"error_estimate={self.error_estimate:.3g}, pathway={self.pathway!r})"
        )

    def as_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value.tolist(),
            "error_estimate": self.error_estimate,
            "pathway": self.pathway,
            "mollified": self.mollified,
        }


class ScalarResult:
    """Scalar counterpart of ``VectorResult``."""

    value: float
    error_estimate: float
    pathway: Pathway
    mollified: bool

    def __init__(
        self,
        value: float,
        *,
        error_estimate: float = 0.0,
        pathway: Pathway = "exact",
        mollified: bool = False,
    ) -> None:
        self.value = float(value)
        self.error_estimate = abs(float(error_estimate))
        self.pathway = pathway
        self.mollified = mollified

    def __repr__(self) -> str:
        return (
            f"ScalarResult(value={self.value!r}, "
            f"error_estimate={self.error_estimate:.3g}, pathway={self.pathway!r})"
        )

    def as_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "pathway": self.pathway,
            "mollified": self.mollified,
        }


Result = Union[VectorResult, ScalarResult]


def result_values(result: Result) -> FloatArray:
    """The value of either result kind as a 1D array."""
    return np.atleast_1d(np.asarray(result.value, dtype=np.float64))
