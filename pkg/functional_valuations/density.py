"""
Radial densities and the weights they induce on R^n.

A density of kind ``alpha`` is continuous on ``[0, inf)`` and induces the
scalar weight ``x -> alpha(|x|)``. A density of kind ``xi`` may blow up at
``0+`` as long as ``xi(t) * t -> 0``; it induces the vector weight
``x -> xi(|x|) x`` extended by 0 at the origin.
"""

import logging
import math
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy import integrate
from typing_extensions import Literal

from .polytope import check_dim
from .type_utils import ArrayLike, FloatArray, as_float_array
from .valuation_error import AdmissibilityError, ArgumentError

logger = logging.getLogger(__name__)

DensityKind = Literal["alpha", "xi"]
ProfileFamily = Literal["hat", "bump", "power", "custom"]
Profile = Callable[[FloatArray], FloatArray]

ADMISSIBILITY_TOL = 1e-6
_SAMPLE_DECADES = (-12.0, -2.0)
_SAMPLE_COUNT = 64
_MIN_VANISHING_SLOPE = 1e-3

_SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


def _hat(radius: float) -> Profile:
    def profile(t: FloatArray) -> FloatArray:
        return np.maximum(0.0, 1.0 - t / radius)

    return profile


def _bump(radius: float) -> Profile:
    def profile(t: FloatArray) -> FloatArray:
        s = np.minimum(t / radius, 1.0)
        out = np.zeros_like(s)
        inside = s < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out

    return profile


def _power(radius: float, power: float) -> Profile:
    hat = _hat(radius)

    def profile(t: FloatArray) -> FloatArray:
        out = np.zeros_like(t)
        positive = t > 0.0
        out[positive] = t[positive] ** (-power) * hat(t[positive])
        if power <= 0.0:
            out[~positive] = 1.0 if power == 0.0 else 0.0
        else:
            out[~positive] = np.inf
        return out

    return profile


def vanishes_at_origin(profile: Profile, radius: float) -> bool:
    """
    Sampling check of ``xi(t) * t -> 0`` as ``t -> 0+``.

    Accepts when ``|xi(t) t|`` at the smallest sample is below
    ``ADMISSIBILITY_TOL`` or still decreasing along the log-log sample grid.
    """
    t = radius * np.logspace(*_SAMPLE_DECADES, _SAMPLE_COUNT)
    g = np.abs(profile(t) * t)
    if not np.all(np.isfinite(g)):
        return False
    if g[0] <= ADMISSIBILITY_TOL:
        return True
    slope = np.polyfit(np.log(t), np.log(g), 1)[0]
    return bool(slope > _MIN_VANISHING_SLOPE)


class RadialDensity:
    """
    A profile ``t -> rho(t)`` on ``[0, inf)`` vanishing beyond ``support_radius``.

    Attributes:
        kind: ``alpha`` (continuous up to 0) or ``xi`` (admissible singularity)
        family: the built-in family, or ``custom``
        support_radius: R > 0 with ``rho(t) = 0`` for ``t > R``
        origin_value: ``alpha(0)`` for kind alpha, else None
        admissible: whether ``xi(t) t -> 0`` holds (always True for alpha)
        power: exponent p of the ``power`` family
    """

    kind: DensityKind
    family: ProfileFamily
    support_radius: float
    origin_value: Optional[float]
    admissible: bool
    power: Optional[float]

    def __init__(
        self,
        *,
        kind: DensityKind,
        profile: Profile,
        support_radius: float,
        family: ProfileFamily = "custom",
        power: Optional[float] = None,
        admissible: Optional[bool] = None,
    ) -> None:
        if not support_radius > 0.0:
            raise ArgumentError(
                "support radius must be positive", detail={"radius": support_radius}
            )
        self.kind = kind
        self.family = family
        self.support_radius = float(support_radius)
        self.power = power
        self._profile = profile
        if kind == "alpha":
            origin = float(profile(np.zeros(1))[0])
            if not math.isfinite(origin):
                raise AdmissibilityError(
                    "kind alpha densities must be finite at 0", detail={"family": family}
                )
            self.origin_value = origin
            self.admissible = True
        else:
            self.origin_value = None
            self.admissible = (
                vanishes_at_origin(profile, self.support_radius)
                if admissible is None
                else admissible
            )
        logger.debug(
            "built %s density %s (R=%g, admissible=%s)",
            kind,
            family,
            self.support_radius,
            self.admissible,
        )

    def __repr__(self) -> str:
        extra = f", p={self.power}" if self.power is not None else ""
        return f"RadialDensity({self.kind}, {self.family}, R={self.support_radius}{extra})"

    def __call__(self, t: ArrayLike) -> FloatArray:
        radii = as_float_array(t)
        values = np.asarray(self._profile(radii), dtype=np.float64)
        return np.where(radii > self.support_radius, 0.0, values)

    def describe(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "kind": self.kind,
            "family": self.family,
            "radius": self.support_radius,
        }
        if self.power is not None:
            out["power"] = self.power
        return out

    def require_admissible(self) -> None:
        if not self.admissible:
            raise AdmissibilityError(
                "xi(t) * t does not vanish as t -> 0+", detail=self.describe()
            )

    def scalar_weight(self) -> "Weight":
        """``zeta(x) = rho(|x|)``."""
        if self.kind != "alpha":
            raise ArgumentError("scalar weights need a kind alpha density", detail=self.describe())
        return Weight(
            lambda x: self(np.linalg.norm(x, axis=-1)),
            support_radius=self.support_radius,
            vector=False,
        )

    def vector_weight(self) -> "Weight":
        """``psi(x) = rho(|x|) x`` with ``psi(o) = 0``."""
        if self.kind == "xi":
            self.require_admissible()

        def psi(x: FloatArray) -> FloatArray:
            t = np.linalg.norm(x, axis=-1)
            scale = np.zeros_like(t)
            positive = t > 0.0
            scale[positive] = self(t[positive])
            result: FloatArray = scale[..., None] * x
            return result

        return Weight(psi, support_radius=self.support_radius, vector=True)


class Weight:
    """
    Compactly supported weight on R^n, scalar or vector valued.

    ``func`` maps ``(N, n)`` points to ``(N,)`` values or ``(N, n)`` vectors
    and vanishes outside the closed ball of radius ``support_radius``.
    """

    def __init__(
        self,
        func: Callable[[FloatArray], FloatArray],
        *,
        support_radius: float,
        vector: bool,
    ) -> None:
        self.func = func
        self.support_radius = float(support_radius)
        self.vector = vector

    def __call__(self, points: ArrayLike) -> FloatArray:
        return np.asarray(self.func(np.atleast_2d(as_float_array(points))), dtype=np.float64)

    def at(self, point: ArrayLike) -> Any:
        out = self(np.atleast_1d(as_float_array(point)).reshape(1, -1))[0]
        return out.copy() if self.vector else float(out)


def make_radial_density(
    kind: DensityKind,
    family: ProfileFamily,
    *,
    radius: float = 1.0,
    power: Optional[float] = None,
    profile: Optional[Profile] = None,
) -> RadialDensity:
    """
    Build a density from one of the built-in profile families.

    ``hat`` is ``max(0, 1 - t/R)``, ``bump`` is ``exp(1 - 1/(1 - (t/R)^2))``
    and ``power`` is ``t^-p`` times the hat. Kind xi power profiles need
    ``p < 1``; kind alpha power profiles need ``p <= 0``. Kind xi densities of
    every family, power included, then go through ``vanishes_at_origin``.
    """
    if family == "hat":
        built = _hat(radius)
    elif family == "bump":
        built = _bump(radius)
    elif family == "power":
        if power is None:
            raise ArgumentError("power family needs an exponent")
        if kind == "xi" and power >= 1.0:
            raise AdmissibilityError(
                "power densities need p < 1 for xi(t) * t to vanish",
                detail={"power": power},
            )
        if kind == "alpha" and power > 0.0:
            raise AdmissibilityError(
                "kind alpha power densities must stay finite at 0",
                detail={"power": power},
            )
        built = _power(radius, power)
    elif family == "custom":
        if profile is None:
            raise ArgumentError("custom family needs a profile callable")
        built = profile
    else:
        raise ArgumentError("unknown profile family", detail={"family": family})
    return RadialDensity(
        kind=kind,
        profile=built,
        support_radius=radius,
        family=family,
        power=power if family == "power" else None,
    )


def radial_integral(density: RadialDensity, dim: int) -> float:
    """``int rho(|x|) dx`` over R^n by the polar formula."""
    check_dim(dim)

    def integrand(t: float) -> float:
        return float(density(np.array([t]))[0]) * t ** (dim - 1)

    value, _ = integrate.quad(integrand, 0.0, density.support_radius, limit=200)
    return _SPHERE_AREA[dim] * float(value)
