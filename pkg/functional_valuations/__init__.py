"""functional-valuations: vector-valued valuations on convex functions, exact and on grids."""

from .config import LoadedConfig, RunConfig, SuiteConfig, SuiteOptions, load_config
from .density import RadialDensity, Weight, make_radial_density, radial_integral
from .function_spec import FunctionSpec, build_function
from .functions import (
    ConvexFunction,
    GridFunction,
    MaxAffineFunction,
    evaluate,
    sample_grid,
    support_function,
)
from .generators import ValidPair, gen_valid_pairs
from .measures import (
    AtomicMeasure,
    elementary_symmetric,
    general_simple_valuation,
    hess_j_integrate,
    ma_atoms,
    ma_integrate,
    ma_integrate_vec,
    theta0_integrate,
)
from .oracles import extract_associated_scalar, monte_carlo_dual_theta0, radial_form_residual
from .polytope import Polytope, moment_vector, volume
from .report import CaseRecord, PropertyReport, report_schema
from .result import ScalarResult, VectorResult
from .runner import AsyncRunner, SyncRunner, run_suite, run_suite_async
from .steiner import SteinerExpansion, homogeneous_decomposition, steiner_expand
from .transform import (
    Action,
    DualCellComplex,
    add_constant,
    add_linear,
    add_quadratic,
    conjugate_grid,
    conjugate_max_affine,
    dilate,
    epi_multiply,
    rotate,
    rotate_complex,
    scale,
    transform_fconvf,
    translate,
)
from .valuation_error import (
    AdmissibilityError,
    ArgumentError,
    ClippingError,
    ConfigError,
    ConvexityError,
    CoverageError,
    DomainError,
    SuiteNotFoundError,
    UnsupportedRepresentationError,
    ValuationError,
)
from .valuations import (
    V_j_alpha_star,
    ValuationSpec,
    dual_side,
    m_alpha_star,
    so2_variant,
    t_j_xi_star,
    z_j_alpha_star,
)

__all__ = [
    "Action",
    "AdmissibilityError",
    "ArgumentError",
    "AsyncRunner",
    "AtomicMeasure",
    "CaseRecord",
    "ClippingError",
    "ConfigError",
    "ConvexFunction",
    "ConvexityError",
    "CoverageError",
    "DomainError",
    "DualCellComplex",
    "FunctionSpec",
    "GridFunction",
    "LoadedConfig",
    "MaxAffineFunction",
    "Polytope",
    "PropertyReport",
    "RadialDensity",
    "RunConfig",
    "ScalarResult",
    "SteinerExpansion",
    "SuiteConfig",
    "SuiteNotFoundError",
    "SuiteOptions",
    "SyncRunner",
    "UnsupportedRepresentationError",
    "V_j_alpha_star",
    "ValidPair",
    "ValuationError",
    "ValuationSpec",
    "VectorResult",
    "Weight",
    "add_constant",
    "add_linear",
    "add_quadratic",
    "build_function",
    "conjugate_grid",
    "conjugate_max_affine",
    "dilate",
    "dual_side",
    "elementary_symmetric",
    "epi_multiply",
    "evaluate",
    "extract_associated_scalar",
    "gen_valid_pairs",
    "general_simple_valuation",
    "hess_j_integrate",
    "homogeneous_decomposition",
    "load_config",
    "m_alpha_star",
    "ma_atoms",
    "ma_integrate",
    "ma_integrate_vec",
    "make_radial_density",
    "moment_vector",
    "monte_carlo_dual_theta0",
    "radial_form_residual",
    "radial_integral",
    "report_schema",
    "rotate",
    "rotate_complex",
    "run_suite",
    "run_suite_async",
    "sample_grid",
    "scale",
    "so2_variant",
    "steiner_expand",
    "support_function",
    "t_j_xi_star",
    "theta0_integrate",
    "transform_fconvf",
    "translate",
    "volume",
    "z_j_alpha_star",
]
