"""Forward composition of finite Blaschke products fixing the origin.

Exact zero-tracked composition, boundary circle-map dynamics, and the
convergence/divergence diagnostics that separate interior settling from
boundary drift.
"""

from .boundary import (
    PsiSample,
    boundary_arg_shift,
    boundary_map_angles,
    boundary_winding,
    circle_orbit,
    identity_convergence_check,
    measure_preservation_test,
    psi_l1_distance,
    radial_limit_probe,
    rybkin_bound,
    rybkin_bound_smallest_zero,
    rybkin_bound_span,
)
from .composition import (
    DEFAULT_DEGREE_CAP,
    CompositionSequence,
    compose_step,
    nested_eval,
    partial_limit_eval,
    preimages,
    truncation_tail_bound,
)
from .core import (
    IDENTITY,
    BlaschkeFactor,
    BlaschkeProduct,
    circle_distance,
    derivative_at_origin,
    factor_eval,
    normalize_rotation,
    product_eval,
    reduce_angle,
    single_zero_product,
    unit,
)
from .counterexample import (
    RadiiSpec,
    build_sequence,
    default_radii,
    divergence_report,
    zero_angles,
)
from .diagnostics import (
    DiagnosticsReport,
    blaschke_sum,
    build_report,
    classification_sum,
    convergence_verdict,
    decade_stats,
    frostman_sum,
    interior_cauchy_gauge,
    schwarz_lower_bound,
)
from .errors import (
    BlaschkeError,
    CapacityError,
    ConsistencyError,
    DegreeCollapseError,
    DivergentProductError,
    DomainError,
    RootFindingError,
    SingularAngleError,
    UsageError,
)
from .kernels import COMPILED

__version__ = "0.1.0"

__all__ = [
    "BlaschkeError",
    "BlaschkeFactor",
    "BlaschkeProduct",
    "CapacityError",
    "COMPILED",
    "CompositionSequence",
    "ConsistencyError",
    "DEFAULT_DEGREE_CAP",
    "DegreeCollapseError",
    "DiagnosticsReport",
    "DivergentProductError",
    "DomainError",
    "IDENTITY",
    "PsiSample",
    "RadiiSpec",
    "RootFindingError",
    "SingularAngleError",
    "UsageError",
    "blaschke_sum",
    "boundary_arg_shift",
    "boundary_map_angles",
    "boundary_winding",
    "build_report",
    "build_sequence",
    "circle_distance",
    "circle_orbit",
    "classification_sum",
    "compose_step",
    "convergence_verdict",
    "decade_stats",
    "default_radii",
    "derivative_at_origin",
    "divergence_report",
    "factor_eval",
    "frostman_sum",
    "identity_convergence_check",
    "interior_cauchy_gauge",
    "measure_preservation_test",
    "nested_eval",
    "normalize_rotation",
    "partial_limit_eval",
    "preimages",
    "product_eval",
    "psi_l1_distance",
    "radial_limit_probe",
    "reduce_angle",
    "rybkin_bound",
    "rybkin_bound_smallest_zero",
    "rybkin_bound_span",
    "schwarz_lower_bound",
    "single_zero_product",
    "truncation_tail_bound",
    "unit",
    "zero_angles",
    "__version__",
]
