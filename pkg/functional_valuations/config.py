"""
Run configuration: parsing, validation and resolution of operator specs.

Operators reference densities by ``name`` or by JSON pointer into the
configuration document (e.g. ``"/densities/1"``).
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import jsonpointer
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import Literal, NotRequired, TypedDict

from .density import RadialDensity, make_radial_density
from .polytope import SUPPORTED_DIMS
from .valuation_error import ConfigError
from .valuations import Family, ValuationSpec, constant_rotation

logger = logging.getLogger(__name__)

SuiteName = Literal[
    "valuation_identity",
    "translation_covariance",
    "vertical_invariance",
    "rotation_equivariance",
    "simplicity",
    "homogeneity",
    "epi_continuity",
    "minkowski_relations",
    "steiner_consistency",
    "conjugation_duality",
    "degree0_constancy",
]

SUITE_NAMES: Tuple[SuiteName, ...] = (
    "valuation_identity",
    "translation_covariance",
    "vertical_invariance",
    "rotation_equivariance",
    "simplicity",
    "homogeneity",
    "epi_continuity",
    "minkowski_relations",
    "steiner_consistency",
    "conjugation_duality",
    "degree0_constancy",
)

DEFAULT_TOLERANCES: Dict[str, float] = {
    "valuation_identity": 1e-9,
    "translation_covariance": 1e-9,
    "vertical_invariance": 1e-9,
    "rotation_equivariance": 1e-9,
    "simplicity": 1e-9,
    "homogeneity": 1e-2,
    "epi_continuity": 1e-4,
    "minkowski_relations": 1e-9,
    "steiner_consistency": 1e-6,
    "conjugation_duality": 1e-9,
    "degree0_constancy": 1e-9,
}

DEFAULT_CASES: Dict[str, int] = {
    "valuation_identity": 50,
    "translation_covariance": 10,
    "vertical_invariance": 10,
    "rotation_equivariance": 20,
    "simplicity": 10,
    "homogeneity": 4,
    "epi_continuity": 5,
    "minkowski_relations": 10,
    "steiner_consistency": 4,
    "conjugation_duality": 10,
    "degree0_constancy": 10,
}

DEFAULT_RESOLUTION = 129
DEFAULT_SAMPLES_LOG2 = 20
MIN_RESOLUTION = 33
DEFAULT_CONFIG_PATH = Path(__file__).parent / "data" / "default_config.json"


class SuiteOptions(TypedDict):
    """
    Per-suite settings; anything omitted falls back to the run level and then
    to the built-in defaults.
    """

    cases: NotRequired[int]
    """
    number of generated cases (for the pair suite: pairs per dimension on the
    exact pathway; a fifth as many grid pairs are added)
    """
    tolerance: NotRequired[float]
    """
    the suite passes when the largest case residual is at most this value
    """
    resolution: NotRequired[int]
    """
    grid nodes per axis, odd and at least 33
    """
    samples: NotRequired[int]
    """
    log2 of the number of quasi-Monte-Carlo points
    """


class DensitySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    kind: Literal["alpha", "xi"]
    family: Literal["hat", "bump", "power"]
    radius: float = Field(1.0, gt=0.0)
    power: Optional[float] = None

    def build(self) -> RadialDensity:
        return make_radial_density(self.kind, self.family, radius=self.radius, power=self.power)


class OperatorSpec(BaseModel):
    """
    ``j`` may be negative to count down from the dimension: ``-1`` is ``n``.
    ``rotation_angle`` is the constant rotation field of ``so2_variant``.
    """

    model_config = ConfigDict(extra="forbid")

    family: Family
    density: str
    j: Optional[int] = None
    rotation_angle: Optional[float] = None
    side: Literal["primal", "dual"] = "primal"
    smooth: bool = False
    label: Optional[str] = None


class OutputSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: str = "reports"
    format: Literal["json", "csv"] = "json"


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dims: List[int] = Field(default_factory=lambda: [1, 2])
    suites: List[SuiteName] = Field(default_factory=lambda: list(SUITE_NAMES))
    operators: List[OperatorSpec] = Field(default_factory=list)
    densities: List[DensitySpec] = Field(default_factory=list)
    resolutions: List[int] = Field(default_factory=lambda: [DEFAULT_RESOLUTION])
    seed: int = 42
    tolerances: Dict[SuiteName, float] = Field(default_factory=dict)
    cases: Dict[SuiteName, int] = Field(default_factory=dict)
    suite_options: Dict[SuiteName, SuiteOptions] = Field(default_factory=dict)
    box_half_width: float = Field(2.0, gt=0.0)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @field_validator("dims")
    @classmethod
    def _dims_supported(cls, dims: List[int]) -> List[int]:
        if not dims:
            raise ValueError("at least one dimension is required")
        bad = [d for d in dims if d not in SUPPORTED_DIMS]
        if bad:
            raise ValueError(f"dimensions must be among {SUPPORTED_DIMS}, got {bad}")
        return dims

    @field_validator("resolutions")
    @classmethod
    def _resolutions_odd(cls, resolutions: List[int]) -> List[int]:
        if not resolutions:
            raise ValueError("at least one resolution is required")
        for r in resolutions:
            _check_resolution(r)
        return resolutions

    @field_validator("seed")
    @classmethod
    def _seed_64_bit(cls, seed: int) -> int:
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return seed

    @field_validator("tolerances")
    @classmethod
    def _tolerances_finite(cls, tolerances: Dict[str, float]) -> Dict[str, float]:
        for name, tol in tolerances.items():
            if not (tol >= 0.0 and math.isfinite(tol)):
                raise ValueError(f"tolerance of {name} must be finite and >= 0")
        return tolerances

    @model_validator(mode="after")
    def _suite_options_valid(self) -> "RunConfig":
        for name, options in self.suite_options.items():
            if "resolution" in options:
                _check_resolution(options["resolution"])
            if options.get("cases", 1) < 1:
                raise ValueError(f"cases of {name} must be positive")
        names = [d.name for d in self.densities if d.name is not None]
        if len(names) != len(set(names)):
            raise ValueError("density names must be unique")
        return self


def _check_resolution(resolution: int) -> None:
    if resolution < MIN_RESOLUTION or resolution % 2 == 0:
        raise ValueError(f"resolutions must be odd and >= {MIN_RESOLUTION}, got {resolution}")


class SuiteConfig:
    """
    Everything one suite run needs, after merging run level and suite options.

    ``tagged`` configs are one of several resolutions of the same suite and
    carry the resolution in their ``label``.
    """

    name: str
    dims: List[int]
    seed: int
    cases: int
    tolerance: float
    resolution: int
    samples: int
    box_half_width: float
    operators: List[ValuationSpec]
    tagged: bool

    def __init__(
        self,
        name: str,
        *,
        dims: List[int],
        seed: int,
        operators: List[ValuationSpec],
        box_half_width: float = 2.0,
        base: Optional[SuiteOptions] = None,
        override: Optional[SuiteOptions] = None,
        tagged: bool = False,
    ) -> None:
        _base: SuiteOptions = base or {}
        _override: SuiteOptions = override or {}

        self.name = name
        self.dims = list(dims)
        self.seed = seed
        self.operators = list(operators)
        self.box_half_width = box_half_width
        self.cases = _override.get("cases", _base.get("cases", DEFAULT_CASES.get(name, 10)))
        self.tolerance = _override.get(
            "tolerance", _base.get("tolerance", DEFAULT_TOLERANCES.get(name, 1e-9))
        )
        self.resolution = _override.get(
            "resolution", _base.get("resolution", DEFAULT_RESOLUTION)
        )
        self.samples = _override.get("samples", _base.get("samples", DEFAULT_SAMPLES_LOG2))
        self.tagged = tagged

    @property
    def label(self) -> str:
        return f"{self.name}_r{self.resolution}" if self.tagged else self.name

    def __repr__(self) -> str:
        return (
            f"SuiteConfig({self.name}, dims={self.dims}, cases={self.cases}, "
            f"tolerance={self.tolerance}, resolution={self.resolution})"
        )


def _density_from_reference(
    reference: str, config: RunConfig, document: Mapping[str, Any]
) -> DensitySpec:
    if reference.startswith("/"):
        try:
            target = jsonpointer.resolve_pointer(document, reference)
        except jsonpointer.JsonPointerException as exc:
            raise ConfigError(
                "density pointer does not resolve", detail={"pointer": reference}
            ) from exc
        return DensitySpec.model_validate(target)
    for density in config.densities:
        if density.name == reference:
            return density
    raise ConfigError("unknown density name", detail={"density": reference})


def resolve_operators(
    config: RunConfig, document: Optional[Mapping[str, Any]] = None
) -> List[ValuationSpec]:
    """Build a ``ValuationSpec`` for every operator descriptor of ``config``."""
    doc = document if document is not None else config.model_dump(mode="json")
    built: Dict[str, RadialDensity] = {}
    specs = []
    for op in config.operators:
        density_spec = _density_from_reference(op.density, config, doc)
        key = density_spec.model_dump_json()
        if key not in built:
            built[key] = density_spec.build()
        field = None
        if op.family == "so2_variant":
            if op.rotation_angle is None:
                raise ConfigError("so2_variant needs rotation_angle", detail={"operator": op.label})
            field = constant_rotation(op.rotation_angle)
        specs.append(
            ValuationSpec(
                op.family,
                built[key],
                j=op.j,
                rotation_field=field,
                side=op.side,
                smooth=op.smooth,
                label=op.label,
            )
        )
    return specs


def _selected(config: RunConfig, only: Optional[List[str]]) -> List[str]:
    if only is None:
        return list(config.suites)
    listed: List[str] = [s for s in config.suites if s in only]
    # named explicitly but not listed under ``suites``: run-level settings apply
    extra: List[str] = [s for s in dict.fromkeys(only) if s not in config.suites]
    return listed + extra


def suite_configs(
    config: RunConfig,
    operators: List[ValuationSpec],
    *,
    only: Optional[List[str]] = None,
    seed: Optional[int] = None,
) -> List[SuiteConfig]:
    """
    One ``SuiteConfig`` per selected suite and grid resolution, in suite
    order. A resolution pinned under ``suite_options`` replaces the run-level
    list for that suite.
    """
    names = _selected(config, only)
    if not names:
        raise ConfigError("no suites selected", detail={"suites": config.suites, "only": only})
    tolerances: Dict[str, float] = dict(config.tolerances)
    cases: Dict[str, int] = dict(config.cases)
    suite_options: Dict[str, SuiteOptions] = dict(config.suite_options)
    configs = []
    for name in names:
        options = suite_options.get(name)
        if options and "resolution" in options:
            resolutions = [options["resolution"]]
        else:
            resolutions = list(dict.fromkeys(config.resolutions))
        for resolution in resolutions:
            base: SuiteOptions = {"resolution": resolution}
            if name in tolerances:
                base["tolerance"] = tolerances[name]
            if name in cases:
                base["cases"] = cases[name]
            configs.append(
                SuiteConfig(
                    name,
                    dims=config.dims,
                    seed=config.seed if seed is None else seed,
                    operators=operators,
                    box_half_width=config.box_half_width,
                    base=base,
                    override=options,
                    tagged=len(resolutions) > 1,
                )
            )
    return configs


class LoadedConfig:
    def __init__(self, config: RunConfig, operators: List[ValuationSpec], path: Path) -> None:
        self.config = config
        self.operators = operators
        self.path = path


def load_config(path: Optional[Path] = None) -> LoadedConfig:
    """
    Parse, validate and resolve a configuration file (the bundled default when
    ``path`` is None). Raises pydantic ``ValidationError`` for schema
    violations and ``ValuationError`` subclasses for unresolvable content.
    """
    source = DEFAULT_CONFIG_PATH if path is None else Path(path)
    try:
        document = json.loads(source.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("cannot read configuration", detail={"path": str(source)}) from exc
    config = RunConfig.model_validate(document)
    operators = resolve_operators(config, document)
    logger.info("loaded %s: %d suites, %d operators", source, len(config.suites), len(operators))
    return LoadedConfig(config, operators, source)
