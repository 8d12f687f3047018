"""
The property suites.

A suite turns a ``SuiteConfig`` into a list of ``Case`` objects. Inputs are
drawn while the list is built, in a fixed order, from a generator seeded by
the run seed and the suite's position, so the cases (and their residuals) do
not depend on how the runner schedules the checks.
"""

import functools
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .config import SUITE_NAMES, SuiteConfig
from .density import RadialDensity, Weight, make_radial_density, radial_integral
from .functions import (
    ConvexFunction,
    GridFunction,
    MaxAffineFunction,
    PointFunction,
    quadratic,
    sample_grid,
    support_function,
    symmetric_box,
)
from .generators import (
    ValidPair,
    gen_valid_pairs,
    random_max_affine,
    random_polytope,
    random_rotation,
    random_smooth,
    simple_function,
    simple_max_affine,
)
from .measures import general_simple_valuation, hess_j_integrate, theta0_integrate
from .oracles import (
    extract_associated_scalar,
    monte_carlo_dual_theta0,
    radial_form_residual,
)
from .polytope import box
from .report import CasePathway
from .result import Result, result_values
from .steiner import default_r_values, steiner_expand, vandermonde_fit
from .transform import (
    DualCell,
    DualCellComplex,
    add_constant,
    add_linear,
    add_quadratic,
    conjugate_grid,
    conjugate_max_affine,
    dilate,
    rotate,
    rotate_complex,
    scale,
    transform_fconvf,
    translate,
)
from .valuation_error import SuiteNotFoundError
from .valuations import (
    V_j_alpha_star,
    ValuationSpec,
    constant_rotation,
    dual_side,
    evaluate,
    m_alpha_star,
    so2_variant,
    t_j_xi_star,
)

logger = logging.getLogger(__name__)

EPI_SEQUENCE = (10.0, 1e3, 1e6)
HOMOGENEITY_FACTORS = (0.5, 2.0, 3.0)
BICONJUGATE_POINTS = 100
MONTE_CARLO_SIGMAS = 3.0
_TINY = 1e-10


class CaseOutcome:
    """What a check found: the raw residual and the quadrature error it may absorb."""

    raw_residual: float
    error_estimate: float
    note: Optional[str]

    def __init__(
        self, raw_residual: float, error_estimate: float = 0.0, note: Optional[str] = None
    ) -> None:
        self.raw_residual = float(raw_residual)
        self.error_estimate = abs(float(error_estimate))
        self.note = note

    def __repr__(self) -> str:
        return (
            f"CaseOutcome(raw_residual={self.raw_residual:.3g}, "
            f"error_estimate={self.error_estimate:.3g})"
        )


class Case:
    """A generated input with the check to run on it."""

    def __init__(
        self,
        *,
        dim: int,
        pathway: CasePathway,
        inputs: Dict[str, Any],
        check: Callable[[], CaseOutcome],
    ) -> None:
        self.dim = dim
        self.pathway = pathway
        self.inputs = inputs
        self.check = check

    def __repr__(self) -> str:
        return f"Case(dim={self.dim}, pathway={self.pathway!r}, inputs={self.inputs})"


SuiteBuilder = Callable[[SuiteConfig], List[Case]]


# -- shared helpers -----------------------------------------------------------


def suite_rng(config: SuiteConfig) -> np.random.Generator:
    index = SUITE_NAMES.index(config.name) if config.name in SUITE_NAMES else len(SUITE_NAMES)
    return np.random.default_rng(np.random.SeedSequence([config.seed, index]))


def _child_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2**63))


def _grid(config: SuiteConfig, func: PointFunction, dim: int) -> GridFunction:
    lower, upper = symmetric_box(dim, config.box_half_width)
    return sample_grid(func, lower=lower, upper=upper, resolution=config.resolution)


def _operators(config: SuiteConfig, dim: int, *, exact: bool = False) -> List[ValuationSpec]:
    return [
        op
        for op in config.operators
        if op.side == "primal" and op.applies_to(dim) and (not exact or op.exact_capable(dim))
    ]


def _alpha_densities(config: SuiteConfig) -> List[RadialDensity]:
    found: Dict[str, RadialDensity] = {}
    for op in config.operators:
        if op.density.kind == "alpha":
            found.setdefault(repr(op.density.describe()), op.density)
    if not found:
        found["hat"] = make_radial_density("alpha", "hat")
    return list(found.values())


def _describe(v: Union[ConvexFunction, DualCellComplex]) -> Dict[str, Any]:
    if isinstance(v, MaxAffineFunction):
        return {"representation": "max_affine", "pieces": len(v)}
    if isinstance(v, DualCellComplex):
        return {"representation": "dual_complex", "cells": len(v)}
    return {"representation": "grid", "resolution": list(v.resolution)}


def _pathway(v: Union[ConvexFunction, DualCellComplex]) -> CasePathway:
    return "grid" if isinstance(v, GridFunction) else "exact"


def _distance(first: Result, second: Result) -> Tuple[float, float]:
    gap = float(np.linalg.norm(result_values(first) - result_values(second)))
    return gap, first.error_estimate + second.error_estimate


def _operator_case(
    op: ValuationSpec,
    v: ConvexFunction,
    dim: int,
    check: Callable[[], CaseOutcome],
    /,
    **inputs: Any,
) -> Case:
    return Case(
        dim=dim,
        pathway=_pathway(v),
        inputs={"operator": op.label, **_describe(v), **inputs},
        check=check,
    )


# -- valuation_identity -------------------------------------------------------


def _identity_check(op: ValuationSpec, pair: ValidPair) -> CaseOutcome:
    results = [evaluate(op, f) for f in (pair.join, pair.meet, pair.v, pair.w)]
    values = [result_values(r) for r in results]
    gap = float(np.linalg.norm(values[0] + values[1] - values[2] - values[3]))
    return CaseOutcome(gap, sum(r.error_estimate for r in results))


def valuation_identity(config: SuiteConfig) -> List[Case]:
    """``Z(v or w) + Z(v and w) = Z(v) + Z(w)`` on constructed valid pairs."""
    rng = suite_rng(config)
    cases = []
    for dim in config.dims:
        plan = (("exact", config.cases), ("grid", max(1, config.cases // 5)))
        for representation, count in plan:
            pairs = gen_valid_pairs(
                _child_seed(rng),
                count,
                dim,
                representation,  # type: ignore[arg-type]
                box_half_width=config.box_half_width,
                resolution=config.resolution,
            )
            ops = _operators(config, dim, exact=representation == "exact")
            for index, pair in enumerate(pairs):
                for op in ops:
                    cases.append(
                        _operator_case(
                            op,
                            pair.v,
                            dim,
                            functools.partial(_identity_check, op, pair),
                            pair=index,
                            witness=pair.witness,
                        )
                    )
    return cases


# -- translation_covariance ---------------------------------------------------


def _associated_volume(op: ValuationSpec, v: ConvexFunction, j: int) -> Result:
    """``V_j`` with the operator's density, on the same quadrature as ``v``."""
    if isinstance(v, GridFunction):
        return hess_j_integrate(v, j, op.density.scalar_weight(), smooth=op.smooth)
    return V_j_alpha_star(v, op.density, j)


def _translation_check(op: ValuationSpec, v: ConvexFunction, y: np.ndarray) -> CaseOutcome:
    n = v.dim
    base = evaluate(op, v)
    moved = evaluate(op, transform_fconvf(v, add_linear(y)))
    error = base.error_estimate + moved.error_estimate
    if op.family == "V_j_alpha":
        gap, _ = _distance(moved, base)
        return CaseOutcome(gap, error)
    expected = np.zeros(n)
    if op.family in ("m_alpha", "z_j_alpha"):
        j = n if op.family == "m_alpha" else op.resolve_j(n)
        volume = _associated_volume(op, v, j)
        expected = float(volume.value) * y
        error += volume.error_estimate * float(np.linalg.norm(y))
    delta = result_values(moved) - result_values(base)
    return CaseOutcome(float(np.linalg.norm(delta - expected)), error)


def _associated_scalar_check(op: ValuationSpec, v: GridFunction) -> CaseOutcome:
    shifts = list(0.5 * np.eye(v.dim))
    fitted = extract_associated_scalar(lambda f: evaluate(op, f), v, shifts)
    volume = _associated_volume(op, v, v.dim)
    gap = max(abs(fitted.value - float(volume.value)), fitted.residual)
    return CaseOutcome(
        gap,
        fitted.error_estimate + volume.error_estimate,
        note=f"associated scalar {fitted.value:.6g}",
    )


def translation_covariance(config: SuiteConfig) -> List[Case]:
    """``Z(v + <y, .>) = Z(v) + Z0(v) y`` with the associated scalar ``Z0``."""
    rng = suite_rng(config)
    cases = []
    for dim in config.dims:
        for _ in range(config.cases):
            v_exact = random_max_affine(rng, dim)
            v_grid = _grid(config, random_smooth(rng, dim, asymmetric=True), dim)
            y = rng.uniform(-1.0, 1.0, size=dim)
            for v in (v_exact, v_grid):
                for op in _operators(config, dim, exact=isinstance(v, MaxAffineFunction)):
                    cases.append(
                        _operator_case(
                            op,
                            v,
                            dim,
                            functools.partial(_translation_check, op, v, y),
                            shift=y.tolist(),
                        )
                    )
        q_like = _grid(config, random_smooth(rng, dim), dim)
        for op in _operators(config, dim):
            if op.family == "m_alpha":
                cases.append(
                    _operator_case(
                        op,
                        q_like,
                        dim,
                        functools.partial(_associated_scalar_check, op, q_like),
                        check="associated_scalar",
                    )
                )
    return cases


# -- vertical_invariance ------------------------------------------------------


def _vertical_check(op: ValuationSpec, v: ConvexFunction, c: float) -> CaseOutcome:
    gap, error = _distance(evaluate(op, transform_fconvf(v, add_constant(c))), evaluate(op, v))
    return CaseOutcome(gap, error)


def vertical_invariance(config: SuiteConfig) -> List[Case]:
    """``Z(v + c) = Z(v)``."""
    rng = suite_rng(config)
    cases = []
    for dim in config.dims:
        for _ in range(config.cases):
            v_exact = random_max_affine(rng, dim)
            v_grid = _grid(config, random_smooth(rng, dim, asymmetric=True), dim)
            c = float(rng.uniform(-2.0, 2.0))
            for v in (v_exact, v_grid):
                for op in _operators(config, dim, exact=isinstance(v, MaxAffineFunction)):
                    cases.append(
                        _operator_case(
                            op, v, dim, functools.partial(_vertical_check, op, v, c), constant=c
                        )
                    )
    return cases


# -- rotation_equivariance ----------------------------------------------------


def _rotation_check(op: ValuationSpec, v: ConvexFunction, theta: np.ndarray) -> CaseOutcome:
    base = evaluate(op, v)
    moved = evaluate(op, transform_fconvf(v, rotate(theta)))
    expected = theta @ result_values(base) if op.is_vector() else result_values(base)
    gap = float(np.linalg.norm(result_values(moved) - expected))
    return CaseOutcome(gap, base.error_estimate + moved.error_estimate)


def _complex_rotation_check(
    op: ValuationSpec, u: DualCellComplex, theta: np.ndarray
) -> CaseOutcome:
    assert op.rotation_field is not None
    base = so2_variant(u, op.density, op.rotation_field)
    moved = so2_variant(rotate_complex(u, theta), op.density, op.rotation_field)
    return CaseOutcome(float(np.linalg.norm(moved.value - theta @ base.value)))


def _reflection_witness() -> CaseOutcome:
    """
    Single atom at ``(1, 0)`` with a quarter-turn field: a reflection that
    fixes the atom flips the expected value, so equivariance fails by
    ``2 xi(1)``. The case passes when the violation is visible.
    """
    xi = make_radial_density("xi", "hat", radius=2.0)
    phi = constant_rotation(math.pi / 2.0)
    u = DualCellComplex([DualCell([1.0, 0.0], box([0.0, 0.0], [1.0, 1.0]))])
    reflection = np.diag([1.0, -1.0])
    base = so2_variant(u, xi, phi)
    moved = so2_variant(rotate_complex(u, reflection), xi, phi)
    violation = float(np.linalg.norm(moved.value - reflection @ base.value))
    return CaseOutcome(max(0.0, 0.5 - violation), note=f"reflection violation {violation:.6g}")


def _radial_form_check(weight: Weight, seed: int, dim: int) -> CaseOutcome:
    return CaseOutcome(radial_form_residual(weight, np.random.default_rng(seed), dim))


def rotation_equivariance(config: SuiteConfig) -> List[Case]:
    """
    ``Z(v o theta^-1) = theta Z(v)`` (scalar operators: invariance) over
    O(n) for radial operators and SO(2) for the rotation-field operator.
    """
    rng = suite_rng(config)
    cases = []
    for dim in config.dims:
        ops = _operators(config, dim, exact=True)
        for _ in range(config.cases):
            v = random_max_affine(rng, dim)
            proper = random_rotation(rng, dim)
            improper = random_rotation(rng, dim, proper=False)
            for op in ops:
                cases.append(
                    _operator_case(
                        op,
                        v,
                        dim,
                        functools.partial(_rotation_check, op, v, proper),
                        rotation="proper",
                    )
                )
                if op.family == "so2_variant":
                    u = conjugate_max_affine(v)
                    cases.append(
                        Case(
                            dim=dim,
                            pathway="exact",
                            inputs={"operator": op.label, **_describe(u), "rotation": "proper"},
                            check=functools.partial(_complex_rotation_check, op, u, proper),
                        )
                    )
                elif dim <= 2:
                    cases.append(
                        _operator_case(
                            op,
                            v,
                            dim,
                            functools.partial(_rotation_check, op, v, improper),
                            rotation="improper",
                        )
                    )
        for _ in range(max(1, config.cases // 4)):
            v_grid = _grid(config, random_smooth(rng, dim, asymmetric=True), dim)
            proper = random_rotation(rng, dim)
            improper = random_rotation(rng, dim, proper=False)
            for op in _operators(config, dim):
                rotations = [("proper", proper)]
                if op.family != "so2_variant" and dim <= 2:
                    rotations.append(("improper", improper))
                for label, theta in rotations:
                    cases.append(
                        _operator_case(
                            op,
                            v_grid,
                            dim,
                            functools.partial(_rotation_check, op, v_grid, theta),
                            rotation=label,
                        )
                    )
        for op in _operators(config, dim):
            if op.family == "t_j_xi" and op.is_top_degree(dim):
                cases.append(
                    Case(
                        dim=dim,
                        pathway="exact",
                        inputs={"operator": op.label, "check": "radial_form"},
                        check=functools.partial(
                            _radial_form_check, op.density.vector_weight(), _child_seed(rng), dim
                        ),
                    )
                )
        if dim == 2:
            cases.append(
                Case(
                    dim=2,
                    pathway="exact",
                    inputs={"check": "reflection_witness"},
                    check=_reflection_witness,
                )
            )
    return cases


# -- simplicity ---------------------------------------------------------------


def _zero_check(evaluator: Callable[[], Result]) -> CaseOutcome:
    result = evaluator()
    return CaseOutcome(float(np.linalg.norm(result_values(result))), result.error_estimate)


def _simple_weights(config: SuiteConfig) -> Tuple[Weight, Weight]:
    alpha = _alpha_densities(config)[0]
    xi = next(
        (op.density for op in config.operators if op.density.kind == "xi"),
        make_radial_density("xi", "hat"),
    )
    return xi.vector_weight(), alpha.scalar_weight()


def simplicity(config: SuiteConfig) -> List[Case]:
    """Simple valuations vanish on functions that are affine along a direction."""
    rng = suite_rng(config)
    psi, zeta = _simple_weights(config)
    cases = []
    for dim in config.dims:
        for _ in range(config.cases):
            func, y = simple_function(rng, dim)
            inputs: List[ConvexFunction] = [_grid(config, func, dim), simple_max_affine(rng, dim)]
            for v in inputs:
                exact = isinstance(v, MaxAffineFunction)
                for op in _operators(config, dim, exact=exact):
                    if not (op.is_top_degree(dim) or op.family == "so2_variant"):
                        continue
                    cases.append(
                        _operator_case(
                            op,
                            v,
                            dim,
                            functools.partial(_zero_check, functools.partial(evaluate, op, v)),
                            direction=y.tolist(),
                        )
                    )
                cases.append(
                    Case(
                        dim=dim,
                        pathway=_pathway(v),
                        inputs={"operator": "general_simple_valuation", **_describe(v)},
                        check=functools.partial(
                            _zero_check,
                            functools.partial(general_simple_valuation, v, psi, zeta),
                        ),
                    )
                )
    return cases


# -- homogeneity --------------------------------------------------------------


def _homogeneity_check(op: ValuationSpec, v: ConvexFunction, lam: float) -> CaseOutcome:
    degree = op.degree(v.dim)
    base = evaluate(op, v)
    scaled = evaluate(op, transform_fconvf(v, scale(lam)))
    b, s = result_values(base), result_values(scaled)
    norm_b, norm_s = float(np.linalg.norm(b)), float(np.linalg.norm(s))
    if norm_b < _TINY:
        return CaseOutcome(norm_s, scaled.error_estimate, note="operator vanishes at v")
    factor = lam**degree
    relative = float(np.linalg.norm(s - factor * b)) / (factor * norm_b)
    exponent = math.log(norm_s / norm_b) / math.log(lam) if norm_s > 0.0 else -math.inf
    error = (base.error_estimate + scaled.error_estimate / factor) / norm_b
    return CaseOutcome(
        max(abs(exponent - degree), relative), error, note=f"degree estimate {exponent:.6g}"
    )


def homogeneity(config: SuiteConfig) -> List[Case]:
    """``Z(lam v) = lam^s Z(v)`` with ``s`` the operator's degree."""
    rng = suite_rng(config)
    cases = []
    for dim in config.dims:
        for _ in range(config.cases):
            inputs: List[ConvexFunction] = [
                random_max_affine(rng, dim),
                _grid(config, random_smooth(rng, dim, asymmetric=True), dim),
            ]
            for v in inputs:
                for op in _operators(config, dim, exact=isinstance(v, MaxAffineFunction)):
                    for lam in HOMOGENEITY_FACTORS:
                        cases.append(
                            _operator_case(
                                op,
                                v,
                                dim,
                                functools.partial(_homogeneity_check, op, v, lam),
                                factor=lam,
                                degree=op.degree(dim),
                            )
                        )
    return cases


# -- epi_continuity -----------------------------------------------------------


def _epi_check(op: ValuationSpec, v: ConvexFunction) -> CaseOutcome:
    base = evaluate(op, v)
    gaps = []
    error = base.error_estimate
    for k in EPI_SEQUENCE:
        if isinstance(v, GridFunction):
            near = transform_fconvf(v, add_quadratic(1.0 / k))
        else:
            near = transform_fconvf(v, dilate(1.0 + 1.0 / k))
        result = evaluate(op, near)
        gaps.append(float(np.linalg.norm(result_values(result) - result_values(base))))
        error = base.error_estimate + result.error_estimate
    note = "gaps " + ", ".join(f"{g:.3g}" for g in gaps)
    return CaseOutcome(gaps[-1], error, note=note)


def epi_continuity(config: SuiteConfig) -> List[Case]:
    """Values converge along epi-convergent sequences ``v + q/k`` and ``v(. / (1 + 1/k))``."""
    rng = suite_rng(config)
    cases = []
    for dim in config.dims:
        for _ in range(config.cases):
            inputs: List[ConvexFunction] = [
                random_max_affine(rng, dim),
                _grid(config, random_smooth(rng, dim, asymmetric=True), dim),
            ]
            for v in inputs:
                for op in _operators(config, dim, exact=isinstance(v, MaxAffineFunction)):
                    cases.append(
                        _operator_case(
                            op,
                            v,
                            dim,
                            functools.partial(_epi_check, op, v),
                            sequence=list(EPI_SEQUENCE),
                        )
                    )
    return cases


# -- minkowski_relations ------------------------------------------------------


def _vanishing_check(
    op: ValuationSpec, v: ConvexFunction, j: int, *, smooth: bool = False
) -> CaseOutcome:
    result = t_j_xi_star(v, op.density, j, smooth=smooth or op.smooth)
    return CaseOutcome(float(np.linalg.norm(result.value)), result.error_estimate)


def _dirac_check(
    op: ValuationSpec, body_v: MaxAffineFunction, vol: float, x0: np.ndarray
) -> CaseOutcome:
    moved = transform_fconvf(body_v, translate(x0))
    result = evaluate(op, moved)
    expected = vol * float(op.density(np.linalg.norm(x0))) * x0
    return CaseOutcome(float(np.linalg.norm(result_values(result) - expected)))


def minkowski_relations(config: SuiteConfig) -> List[Case]:
    """
    ``t(h_K) = o`` in every degree, and ``t_n`` of a translated support
    function is ``vol(K) xi(|x|) x``.

    Grid support functions kink off the grid lines and are mollified first.
    """
    rng = suite_rng(config)
    cases = []
    alphas = _alpha_densities(config)
    for dim in config.dims:
        top_ops = [
            op
            for op in _operators(config, dim)
            if op.family == "t_j_xi" and op.is_top_degree(dim)
        ]
        for _ in range(config.cases):
            body = random_polytope(rng, dim)
            h = support_function(body)
            h_grid = _grid(config, support_function(random_polytope(rng, dim)), dim)
            radius = min((op.density.support_radius for op in top_ops), default=1.0)
            direction = rng.standard_normal(dim)
            x0 = direction / np.linalg.norm(direction) * rng.uniform(0.1, 0.9) * radius
            for op in top_ops:
                cases.append(
                    _operator_case(
                        op,
                        h,
                        dim,
                        functools.partial(_vanishing_check, op, h, dim),
                        relation="t(h_K)",
                    )
                )
                cases.append(
                    _operator_case(
                        op,
                        h_grid,
                        dim,
                        functools.partial(_vanishing_check, op, h_grid, dim, smooth=True),
                        relation="t(h_K)",
                    )
                )
                cases.append(
                    _operator_case(
                        op,
                        h,
                        dim,
                        functools.partial(_dirac_check, op, h, body.volume(), x0),
                        relation="translated",
                        shift=x0.tolist(),
                    )
                )
            for alpha in alphas:
                for j in range(1, dim):
                    spec = ValuationSpec("t_j_xi", alpha, j=j)
                    cases.append(
                        _operator_case(
                            spec,
                            h_grid,
                            dim,
                            functools.partial(_vanishing_check, spec, h_grid, j, smooth=True),
                            relation="t(h_K)",
                            j=j,
                        )
                    )
    return cases


# -- steiner_consistency ------------------------------------------------------


def _steiner_check(v: GridFunction, alpha: RadialDensity) -> CaseOutcome:
    expansion = steiner_expand(v, alpha)
    return CaseOutcome(
        expansion.max_cross_check(),
        note=(
            f"fit residual {expansion.fit_residual:.3g}, "
            f"condition {expansion.condition_number:.3g}"
        ),
    )


def _worked_example_check() -> CaseOutcome:
    def shifted(points: np.ndarray) -> np.ndarray:
        result: np.ndarray = 0.5 * (points[:, 0] - 1.0) ** 2
        return result

    lower, upper = symmetric_box(1, 2.0)
    v = sample_grid(shifted, lower=lower, upper=upper, resolution=129)
    expansion = steiner_expand(v, make_radial_density("alpha", "hat"))
    expected = np.array([[-1.0], [-1.0], [0.0]])
    gap = float(np.abs(expansion.coefficients - expected).max())
    return CaseOutcome(max(gap, expansion.max_cross_check()))


def _endpoint_check(v: GridFunction, body_moment: np.ndarray, alpha: RadialDensity) -> CaseOutcome:
    expansion = steiner_expand(v, alpha, smooth=True)
    assert alpha.origin_value is not None
    gap = float(np.linalg.norm(expansion.coefficients[0] - alpha.origin_value * body_moment))
    return CaseOutcome(gap, note="constant coefficient against alpha(0) m(K)")


def steiner_consistency(config: SuiteConfig) -> List[Case]:
    """Coefficients of ``m*(v + r q)`` equal the intrinsic-moment and Minkowski-vector parts."""
    rng = suite_rng(config)
    cases = []
    alphas = _alpha_densities(config)
    for dim in config.dims:
        if dim == 1:
            cases.append(
                Case(
                    dim=1,
                    pathway="grid",
                    inputs={"check": "worked_example", "v": "(x - 1)^2 / 2"},
                    check=_worked_example_check,
                )
            )
        for _ in range(config.cases):
            v = _grid(config, random_smooth(rng, dim, asymmetric=True), dim)
            body = random_polytope(rng, dim)
            h_grid = _grid(config, support_function(body), dim)
            for alpha in alphas:
                described = alpha.describe()
                cases.append(
                    Case(
                        dim=dim,
                        pathway="grid",
                        inputs={**_describe(v), "density": described},
                        check=functools.partial(_steiner_check, v, alpha),
                    )
                )
                cases.append(
                    Case(
                        dim=dim,
                        pathway="grid",
                        inputs={**_describe(h_grid), "density": described, "check": "endpoint"},
                        check=functools.partial(
                            _endpoint_check, h_grid, body.moment_vector(), alpha
                        ),
                    )
                )
    return cases


# -- conjugation_duality ------------------------------------------------------


def _theta0_bitwise_check(v: MaxAffineFunction, zeta: Weight) -> CaseOutcome:
    primal = theta0_integrate(v, zeta)
    dual = theta0_integrate(conjugate_max_affine(v), zeta)
    return CaseOutcome(float(np.abs(primal.value - dual.value).max()))


def _monte_carlo_check(
    v: MaxAffineFunction, zeta: Weight, samples_log2: int, seed: int
) -> CaseOutcome:
    u = conjugate_max_affine(v)
    exact = theta0_integrate(u, zeta)
    estimate = monte_carlo_dual_theta0(u, zeta, samples_log2=samples_log2, seed=seed)
    gap = float(np.abs(estimate.value - exact.value).max())
    return CaseOutcome(
        gap,
        MONTE_CARLO_SIGMAS * float(estimate.standard_error.max()),
        note=f"{estimate.samples} samples",
    )


def _dual_side_check(op: ValuationSpec, v: MaxAffineFunction) -> CaseOutcome:
    gap, _ = _distance(dual_side(op, conjugate_max_affine(v)), evaluate(op, v))
    return CaseOutcome(gap)


def _biconjugate_check(v: MaxAffineFunction, points: np.ndarray) -> CaseOutcome:
    u = conjugate_max_affine(v)
    gap = float(np.abs(u.primal_value(points) - v(points)).max())
    return CaseOutcome(gap)


def _partition_check(v: MaxAffineFunction) -> CaseOutcome:
    u = conjugate_max_affine(v)
    whole = u.domain.volume()
    return CaseOutcome(abs(u.total_volume() - whole) / whole)


def _single_cell_check(body_v: MaxAffineFunction, vol: float, moment: np.ndarray) -> CaseOutcome:
    u = conjugate_max_affine(body_v)
    if len(u) != 1:
        return CaseOutcome(1.0, note=f"{len(u)} cells")
    cell = u.cells[0]
    gap = abs(cell.volume - vol) + float(np.linalg.norm(cell.moment - moment))
    return CaseOutcome(gap + float(np.linalg.norm(cell.gradient)))


def _moment_check(
    v: ConvexFunction, alpha: RadialDensity, moment: np.ndarray, *, smooth: bool = False
) -> CaseOutcome:
    assert alpha.origin_value is not None
    result = m_alpha_star(v, alpha, smooth=smooth)
    gap = float(np.linalg.norm(result.value - alpha.origin_value * moment))
    return CaseOutcome(gap, result.error_estimate)


def _grid_biconjugate_check(f: GridFunction) -> CaseOutcome:
    dual = conjugate_grid(f)
    back = conjugate_grid(dual, lower=f.lower, upper=f.upper, resolution=list(f.resolution))
    gap = float(np.abs(back.values - f.values).max())
    lipschitz = float(np.linalg.norm(np.maximum(np.abs(f.lower), np.abs(f.upper))))
    return CaseOutcome(gap, 2.0 * float(f.spacing.max()) * lipschitz)


def conjugation_duality(config: SuiteConfig) -> List[Case]:
    """Primal and dual evaluations agree; conjugation round-trips."""
    rng = suite_rng(config)
    cases = []
    alphas = _alpha_densities(config)
    zeta = alphas[0].scalar_weight()
    monte_carlo_cases = min(config.cases, 4)
    for dim in config.dims:
        lower, upper = symmetric_box(dim, config.box_half_width)
        for index in range(config.cases):
            v = random_max_affine(rng, dim)
            described = _describe(v)
            points = rng.uniform(lower, upper, size=(BICONJUGATE_POINTS, dim))
            cases.append(
                Case(
                    dim=dim,
                    pathway="exact",
                    inputs={**described, "check": "theta0_bitwise"},
                    check=functools.partial(_theta0_bitwise_check, v, zeta),
                )
            )
            if index < monte_carlo_cases:
                cases.append(
                    Case(
                        dim=dim,
                        pathway="monte_carlo",
                        inputs={
                            **described,
                            "check": "monte_carlo",
                            "samples_log2": config.samples,
                        },
                        check=functools.partial(
                            _monte_carlo_check, v, zeta, config.samples, _child_seed(rng)
                        ),
                    )
                )
            for op in _operators(config, dim, exact=True):
                if op.is_top_degree(dim):
                    cases.append(
                        _operator_case(
                            op,
                            v,
                            dim,
                            functools.partial(_dual_side_check, op, v),
                            check="dual_side",
                        )
                    )
            cases.append(
                Case(
                    dim=dim,
                    pathway="exact",
                    inputs={**described, "check": "biconjugate"},
                    check=functools.partial(_biconjugate_check, v, points),
                )
            )
            cases.append(
                Case(
                    dim=dim,
                    pathway="exact",
                    inputs={**described, "check": "partition"},
                    check=functools.partial(_partition_check, v),
                )
            )

            body = random_polytope(rng, dim)
            h = support_function(body)
            cases.append(
                Case(
                    dim=dim,
                    pathway="exact",
                    inputs={**_describe(h), "check": "single_cell"},
                    check=functools.partial(
                        _single_cell_check, h, body.volume(), body.moment_vector()
                    ),
                )
            )
            grid_body = random_polytope(rng, dim)
            h_grid = _grid(config, support_function(grid_body), dim)
            for alpha in alphas:
                cases.append(
                    Case(
                        dim=dim,
                        pathway="exact",
                        inputs={**_describe(h), "check": "moment", "density": alpha.describe()},
                        check=functools.partial(_moment_check, h, alpha, body.moment_vector()),
                    )
                )
                cases.append(
                    Case(
                        dim=dim,
                        pathway="grid",
                        inputs={
                            **_describe(h_grid),
                            "check": "moment",
                            "density": alpha.describe(),
                        },
                        check=functools.partial(
                            _moment_check, h_grid, alpha, grid_body.moment_vector(), smooth=True
                        ),
                    )
                )
        q_grid = _grid(config, quadratic, dim)
        cases.append(
            Case(
                dim=dim,
                pathway="grid",
                inputs={**_describe(q_grid), "check": "grid_biconjugate"},
                check=functools.partial(_grid_biconjugate_check, q_grid),
            )
        )
    return cases


# -- degree0_constancy --------------------------------------------------------


def _degree0_check(v: ConvexFunction, alpha: RadialDensity, reference: float) -> CaseOutcome:
    return CaseOutcome(abs(V_j_alpha_star(v, alpha, 0).value - reference))


def _top_coefficient_check(v: GridFunction, alpha: RadialDensity) -> CaseOutcome:
    n = v.dim
    weight = alpha.scalar_weight()
    radii = np.array(default_r_values(n))
    samples = np.array(
        [
            hess_j_integrate(transform_fconvf(v, add_quadratic(float(r))), n, weight).value
            for r in radii
        ]
    )
    coefficients, fit_residual, _ = vandermonde_fit(radii, samples, n)
    reference = hess_j_integrate(v, 0, weight)
    gap = abs(float(coefficients[n]) - float(reference.value))
    return CaseOutcome(gap, note=f"fit residual {fit_residual:.3g}")


def degree0_constancy(config: SuiteConfig) -> List[Case]:
    """Degree-0 operators do not depend on the function."""
    rng = suite_rng(config)
    cases = []
    alphas = _alpha_densities(config)
    for dim in config.dims:
        references = [radial_integral(alpha, dim) for alpha in alphas]
        for _ in range(config.cases):
            inputs: List[ConvexFunction] = [
                random_max_affine(rng, dim),
                _grid(config, random_smooth(rng, dim, asymmetric=True), dim),
            ]
            for v in inputs:
                for alpha, reference in zip(alphas, references):
                    cases.append(
                        Case(
                            dim=dim,
                            pathway=_pathway(v),
                            inputs={**_describe(v), "density": alpha.describe(), "check": "V_0"},
                            check=functools.partial(_degree0_check, v, alpha, reference),
                        )
                    )
                    if isinstance(v, GridFunction):
                        cases.append(
                            Case(
                                dim=dim,
                                pathway="grid",
                                inputs={
                                    **_describe(v),
                                    "density": alpha.describe(),
                                    "check": "top_coefficient",
                                },
                                check=functools.partial(_top_coefficient_check, v, alpha),
                            )
                        )
    return cases


SUITES: Dict[str, SuiteBuilder] = {
    "valuation_identity": valuation_identity,
    "translation_covariance": translation_covariance,
    "vertical_invariance": vertical_invariance,
    "rotation_equivariance": rotation_equivariance,
    "simplicity": simplicity,
    "homogeneity": homogeneity,
    "epi_continuity": epi_continuity,
    "minkowski_relations": minkowski_relations,
    "steiner_consistency": steiner_consistency,
    "conjugation_duality": conjugation_duality,
    "degree0_constancy": degree0_constancy,
}


def get_suite(name: str) -> SuiteBuilder:
    try:
        return SUITES[name]
    except KeyError:
        raise SuiteNotFoundError(
            "unknown property suite", detail={"suite": name, "known": sorted(SUITES)}
        ) from None


def build_cases(config: SuiteConfig) -> List[Case]:
    cases = get_suite(config.name)(config)
    logger.info("suite %s: %d cases", config.name, len(cases))
    return cases
