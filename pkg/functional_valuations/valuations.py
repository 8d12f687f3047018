"""
Named vector and scalar valuations on finite convex functions.

Every operator takes ``v`` as a ``MaxAffineFunction`` (exact, atoms of the
Monge-Ampere measure) or a ``GridFunction`` (finite-difference quadrature).
Intermediate degrees ``j < n`` need the grid pathway.
"""

import logging
from typing import Any, Callable, Dict, Optional, Union

import numpy as np
from typing_extensions import Literal

from .density import RadialDensity, Weight, radial_integral
from .functions import ConvexFunction, GridFunction
from .measures import (
    hess_j_integrate,
    ma_atoms,
    ma_integrate,
    ma_integrate_vec,
    theta0_integrate,
)
from .result import Result, ScalarResult, VectorResult
from .transform import DualCellComplex
from .type_utils import FloatArray
from .valuation_error import (
    AdmissibilityError,
    ArgumentError,
    UnsupportedRepresentationError,
)

logger = logging.getLogger(__name__)

Family = Literal["m_alpha", "t_j_xi", "z_j_alpha", "V_j_alpha", "so2_variant"]
Side = Literal["primal", "dual"]
RotationField = Callable[[float], FloatArray]

FAMILIES = ("m_alpha", "t_j_xi", "z_j_alpha", "V_j_alpha", "so2_variant")
_ROTATION_TOL = 1e-9


def rotation_matrix(angle: float) -> FloatArray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def constant_rotation(angle: float) -> RotationField:
    """``Phi(t) = rotation by angle`` for every t."""
    matrix = rotation_matrix(angle)

    def field(t: float) -> FloatArray:
        return matrix

    return field


def _require_alpha(density: RadialDensity, operator: str) -> None:
    if density.kind != "alpha":
        raise ArgumentError(
            f"{operator} needs a kind alpha density", detail=density.describe()
        )


def _check_degree(j: int, n: int) -> None:
    if not 0 <= j <= n:
        raise ArgumentError("degree j out of range", detail={"j": j, "n": n})


def m_alpha_star(v: ConvexFunction, alpha: RadialDensity, *, smooth: bool = False) -> VectorResult:
    """``int alpha(|x|) grad v det Hess v dx``."""
    _require_alpha(alpha, "m_alpha_star")
    return theta0_integrate(v, alpha.scalar_weight(), smooth=smooth)


def t_j_xi_star(
    v: ConvexFunction, density: RadialDensity, j: int, *, smooth: bool = False
) -> VectorResult:
    """
    ``int rho(|x|) x [Hess v]_j dx``.

    At ``j = n`` this is ``int xi(|x|) x dMA(v)`` and accepts admissible
    kind xi densities; below ``n`` the density must be of kind alpha.
    """
    n = v.dim
    _check_degree(j, n)
    if j == n:
        return ma_integrate_vec(v, density.vector_weight(), smooth=smooth)
    _require_alpha(density, "t_j_xi_star below top degree")
    if j == 0:
        return VectorResult(np.zeros(n))
    result = hess_j_integrate(v, j, density.scalar_weight(), factor="position", smooth=smooth)
    assert isinstance(result, VectorResult)
    return result


def z_j_alpha_star(
    v: ConvexFunction, alpha: RadialDensity, j: int, *, smooth: bool = False
) -> VectorResult:
    """``int alpha(|x|) grad v [Hess v]_j dx``; ``j = n`` is ``m_alpha_star``."""
    _check_degree(j, v.dim)
    if j == v.dim:
        return m_alpha_star(v, alpha, smooth=smooth)
    _require_alpha(alpha, "z_j_alpha_star")
    result = hess_j_integrate(v, j, alpha.scalar_weight(), factor="gradient", smooth=smooth)
    assert isinstance(result, VectorResult)
    return result


def V_j_alpha_star(
    v: ConvexFunction, alpha: RadialDensity, j: int, *, smooth: bool = False
) -> ScalarResult:
    """``int alpha(|x|) [Hess v]_j dx``; ``j = 0`` does not depend on ``v``."""
    _check_degree(j, v.dim)
    _require_alpha(alpha, "V_j_alpha_star")
    if j == 0:
        return ScalarResult(radial_integral(alpha, v.dim))
    if j == v.dim:
        return ma_integrate(v, alpha.scalar_weight(), smooth=smooth)
    result = hess_j_integrate(v, j, alpha.scalar_weight(), smooth=smooth)
    assert isinstance(result, ScalarResult)
    return result


def _field_matrices(phi: RotationField, radii: FloatArray) -> FloatArray:
    """``Phi`` at every radius; a field returning one matrix for the whole array is constant."""
    try:
        batch = np.asarray(phi(radii), dtype=np.float64)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        batch = None
    if batch is not None and batch.shape == (2, 2):
        return np.broadcast_to(batch, (len(radii), 2, 2))
    return np.array([np.asarray(phi(float(t)), dtype=np.float64) for t in radii]).reshape(-1, 2, 2)


def _field_weight(xi: RadialDensity, phi: RotationField, samples: FloatArray) -> Weight:
    """``x -> xi(|x|) Phi(|x|) x``; checks ``Phi`` at the radii in ``samples``."""
    for t in np.unique(np.round(samples, 12)):
        matrix = np.asarray(phi(float(t)), dtype=np.float64)
        if (
            matrix.shape != (2, 2)
            or np.abs(matrix.T @ matrix - np.eye(2)).max() > _ROTATION_TOL
            or np.linalg.det(matrix) < 0.0
        ):
            raise ArgumentError(
                "rotation field must be a proper rotation", detail={"t": float(t)}
            )
    base = xi.vector_weight()

    def psi(x: FloatArray) -> FloatArray:
        t = np.linalg.norm(x, axis=-1)
        plain = base(x)
        matrices = _field_matrices(phi, t)
        result: FloatArray = np.einsum("nij,nj->ni", matrices, plain)
        return result

    return Weight(psi, support_radius=xi.support_radius, vector=True)


def so2_variant(
    u: Union[ConvexFunction, DualCellComplex],
    xi: RadialDensity,
    phi: RotationField,
    *,
    smooth: bool = False,
) -> VectorResult:
    """
    ``int xi(|x|) Phi(|x|) x dMA(v)`` in the plane.

    Equivariant under proper rotations only: ``Phi`` commutes with SO(2)
    but not with reflections.
    """
    if u.dim != 2:
        raise ArgumentError("the rotation-field operator is planar", detail={"dim": u.dim})
    xi.require_admissible()
    if isinstance(u, GridFunction):
        radii = np.linspace(0.0, xi.support_radius, 17)
        return ma_integrate_vec(u, _field_weight(xi, phi, radii), smooth=smooth)
    measure = ma_atoms(u)
    if not measure.atoms:
        return VectorResult(np.zeros(2))
    radii = np.linalg.norm(measure.locations, axis=1)
    weight = _field_weight(xi, phi, radii)
    return VectorResult(measure.masses @ weight(measure.locations))


class ValuationSpec:
    """
    A named operator with its parameters.

    Attributes:
        family: which operator
        j: degree index for the ``*_j_*`` families
        density: alpha or xi density
        rotation_field: ``Phi`` for ``so2_variant``
        side: evaluate on ``v`` (primal) or on its conjugate ``u`` (dual)
        smooth: mollify grid samples before differencing
    """

    family: Family
    j: Optional[int]
    density: RadialDensity
    rotation_field: Optional[RotationField]
    side: Side
    smooth: bool

    def __init__(
        self,
        family: Family,
        density: RadialDensity,
        *,
        j: Optional[int] = None,
        rotation_field: Optional[RotationField] = None,
        side: Side = "primal",
        smooth: bool = False,
        label: Optional[str] = None,
    ) -> None:
        if family not in FAMILIES:
            raise ArgumentError("unknown operator family", detail={"family": family})
        if family in ("t_j_xi", "z_j_alpha", "V_j_alpha") and j is None:
            raise ArgumentError("operator needs a degree j", detail={"family": family})
        if family == "so2_variant" and rotation_field is None:
            raise ArgumentError("so2_variant needs a rotation field")
        if family in ("m_alpha", "z_j_alpha", "V_j_alpha") and density.kind != "alpha":
            raise ArgumentError(
                "operator needs a kind alpha density",
                detail={"family": family, **density.describe()},
            )
        if density.kind == "xi" and not density.admissible:
            raise AdmissibilityError(
                "xi(t) * t does not vanish as t -> 0+",
                detail={"family": family, **density.describe()},
            )
        self.family = family
        self.j = j
        self.density = density
        self.rotation_field = rotation_field
        self.side = side
        self.smooth = smooth
        self.label = label or self._default_label()

    def _default_label(self) -> str:
        if self.j is None:
            return self.family
        return f"{self.family}[j={self.j}]"

    def __repr__(self) -> str:
        return f"ValuationSpec({self.label}, {self.density!r}, side={self.side!r})"

    def degree(self, n: int) -> int:
        """Homogeneity degree under ``v -> lam v``."""
        if self.family == "m_alpha":
            return n + 1
        if self.family == "z_j_alpha":
            return self.resolve_j(n) + 1
        if self.family == "so2_variant":
            return n
        return self.resolve_j(n)

    def resolve_j(self, n: int) -> int:
        """Degree index; negative values count down from ``n`` (``-1`` is ``n``)."""
        assert self.j is not None
        return self.j if self.j >= 0 else n + 1 + self.j

    def applies_to(self, n: int) -> bool:
        """Whether the operator is defined in dimension ``n``."""
        if self.family == "so2_variant":
            return n == 2
        if self.j is None:
            return True
        j = self.resolve_j(n)
        if not 0 <= j <= n:
            return False
        return not (self.density.kind == "xi" and j < n)

    def exact_capable(self, n: int) -> bool:
        """Whether max-affine inputs are supported (top degree, or a trivial j = 0)."""
        if self.j is None:
            return True
        j = self.resolve_j(n)
        return j == n or (j == 0 and self.family in ("t_j_xi", "V_j_alpha"))

    def is_top_degree(self, n: int) -> bool:
        return self.j is None or self.resolve_j(n) == n

    def is_vector(self) -> bool:
        return self.family != "V_j_alpha"

    def describe(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"family": self.family, "density": self.density.describe()}
        if self.j is not None:
            out["j"] = self.j
        if self.side != "primal":
            out["side"] = self.side
        return out


def evaluate(spec: ValuationSpec, v: ConvexFunction) -> Result:
    """Evaluate ``spec`` on the primal function ``v``."""
    n = v.dim
    if spec.family == "m_alpha":
        return m_alpha_star(v, spec.density, smooth=spec.smooth)
    if spec.family == "t_j_xi":
        return t_j_xi_star(v, spec.density, spec.resolve_j(n), smooth=spec.smooth)
    if spec.family == "z_j_alpha":
        return z_j_alpha_star(v, spec.density, spec.resolve_j(n), smooth=spec.smooth)
    if spec.family == "V_j_alpha":
        return V_j_alpha_star(v, spec.density, spec.resolve_j(n), smooth=spec.smooth)
    assert spec.rotation_field is not None
    return so2_variant(v, spec.density, spec.rotation_field, smooth=spec.smooth)


def _dual_grid_integral(
    u: GridFunction, integrand: Callable[[FloatArray, FloatArray], FloatArray]
) -> VectorResult:
    """Trapezoid rule over the box of ``integrand(x, grad u(x))``."""

    def trapezoid(values: FloatArray, spacing: FloatArray, lower: FloatArray) -> FloatArray:
        grads = np.gradient(values, *spacing, edge_order=2)
        if u.dim == 1:
            grads = [grads]
        grad = np.stack(grads, axis=-1).reshape(-1, u.dim)
        axes = [lower[i] + spacing[i] * np.arange(values.shape[i]) for i in range(u.dim)]
        points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, u.dim)
        weights = np.ones(values.shape)
        for axis in range(u.dim):
            edge = [slice(None)] * u.dim
            for end in (0, -1):
                edge[axis] = end
                weights[tuple(edge)] *= 0.5
        terms = integrand(points, grad) * weights.reshape(-1, 1)
        return np.sum(terms, axis=0) * float(np.prod(spacing))

    values = np.asarray(u.values)
    fine = trapezoid(values, u.spacing, u.lower)
    coarse = trapezoid(
        values[tuple(slice(None, None, 2) for _ in range(u.dim))], 2.0 * u.spacing, u.lower
    )
    return VectorResult(
        fine, error_estimate=float(np.linalg.norm(fine - coarse)), pathway="grid"
    )


def dual_side(spec: ValuationSpec, u: Union[DualCellComplex, GridFunction]) -> Result:
    """
    Evaluate ``spec`` on the conjugate side.

    ``m_alpha`` becomes ``int_{dom u} alpha(|grad u|) x dx``, ``t_j_xi`` at
    top degree becomes ``int_{dom u} xi(|grad u|) grad u dx``; both agree
    with the primal operator applied to ``u*``.
    """
    n = u.dim
    family = spec.family
    j = spec.resolve_j(n) if spec.j is not None else n
    if family in ("t_j_xi", "z_j_alpha", "V_j_alpha") and j != n:
        raise UnsupportedRepresentationError(
            "only top-degree operators have a dual-side form", detail={"j": j, "n": n}
        )
    if isinstance(u, DualCellComplex):
        if family in ("m_alpha", "z_j_alpha"):
            return theta0_integrate(u, spec.density.scalar_weight())
        if family == "t_j_xi":
            return ma_integrate_vec(u, spec.density.vector_weight())
        if family == "V_j_alpha":
            return ma_integrate(u, spec.density.scalar_weight())
        assert spec.rotation_field is not None
        return so2_variant(u, spec.density, spec.rotation_field)
    if not isinstance(u, GridFunction):
        raise UnsupportedRepresentationError(
            "dual side takes a dual complex or a grid function",
            detail={"type": type(u).__name__},
        )
    density = spec.density
    if family in ("m_alpha", "z_j_alpha"):
        return _dual_grid_integral(
            u,
            lambda x, g: density(np.linalg.norm(g, axis=-1))[:, None] * x,
        )
    if family == "t_j_xi":
        psi = density.vector_weight()
        return _dual_grid_integral(u, lambda x, g: psi(g))
    if family == "V_j_alpha":
        grid = _dual_grid_integral(
            u, lambda x, g: density(np.linalg.norm(g, axis=-1))[:, None]
        )
        return ScalarResult(
            float(grid.value[0]), error_estimate=grid.error_estimate, pathway="grid"
        )
    assert spec.rotation_field is not None
    radii = np.linspace(0.0, density.support_radius, 17)
    weight = _field_weight(density, spec.rotation_field, radii)
    return _dual_grid_integral(u, lambda x, g: weight(g))
