"""schwarz_lab: numerical verification of boundary Schwarz lemmas, invariant
metric bounds, and rigidity certificates on the unit balls of lp(C^n)."""

from .errors import (
    BadParams,
    DimensionMismatch,
    HypothesisFailed,
    InsufficientClearance,
    NoConvergence,
    NotOnBoundary,
    OutsideBall,
    OutsideDisk,
    PoleHit,
    QuadratureDivergence,
    SchemaError,
    SchwarzLabError,
    SingularGradient,
    StepTooLarge,
    ZeroVector,
)
from .geometry import (
    BoundaryPoint,
    Exponent,
    as_exponent,
    cinner,
    cvector,
    defining_rho,
    grad_rho,
    hyperbolic_distance,
    norm_p,
    norming_functional,
    normal_tangent_decompose,
    pluriharmonic_V,
    realify,
    rigidity_v,
    rvector,
    schwarz_v,
    tangent_basis,
    tangent_residuals,
    unrealify,
)
from .maps import (
    Compose,
    ConjugateCoordinate,
    Constant,
    Coordinate,
    LinearMatrix,
    MapExpr,
    MapTuple,
    MoebiusDisk,
    Power,
    Product,
    Scale,
    Sum,
    component,
    conjugate_map,
    evaluate,
    eval_scalar,
    identity_map,
    map_from_json,
    map_to_json,
)
from .gallery import (
    ball_self_map_instances,
    gallery,
    gallery_names,
    haar_unitary,
    pluriharmonic_boundary_instances,
)
from .diff import (
    CauchyConfig,
    JacobianRecord,
    RadialDerivative,
    RichardsonConfig,
    complex_jacobian,
    complex_jacobian_fd,
    cr_blocks,
    holomorphy_residual,
    pluriharmonic_residual,
    radial_boundary_derivative,
    real_jacobian,
)
from .verify import (
    DiskGrid,
    HypothesisCheck,
    LambdaCertificate,
    Verdict,
    VerifyConfig,
    boundary_slope_check,
    harnack_certificate,
    operator_norm_lower,
    pseudo_hyperbolic_distance,
    sample_ball,
    verify_kalaj,
    verify_liu_wang,
    verify_lp_boundary_schwarz,
    verify_pluriharmonic_boundary,
    verify_product_slice,
    verify_schwarz_pick,
    verify_zhu,
)
from .caratheodory import (
    CompetitorFamily,
    MetricQuery,
    OptBudget,
    OptResult,
    competitor_map,
    competitor_membership_max,
    distance_lower_bound_opt,
    distance_origin_closed,
    metric_lower_bound_opt,
    metric_origin_closed,
)
from .rigidity import (
    RigidityConfig,
    RigidityInstance,
    RigidityReport,
    check_proof_chain,
    check_rigidity,
    counterexample_polydisk_eigen,
    equality_case_1d,
    halton_ball_grid,
)
from .suite import (
    JobSpec,
    SuiteConfig,
    emit_report,
    parse_suite,
    run_suite,
    serialize_suite,
)

__version__ = "0.1.0"
