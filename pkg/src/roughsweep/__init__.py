"""Sweeping processes perturbed by Young and rough signals.

Building blocks: convex geometry with metric projections (:mod:`.convex`),
grids and p-variation seminorms (:mod:`.paths`), Young/rough integration of
controlled paths (:mod:`.rough`), fractional Brownian sampling
(:mod:`.fbm`), catching-up solvers (:mod:`.solvers`), and post-hoc
diagnostics (:mod:`.diagnostics`).  The ``roughsweep`` command drives the
same code from JSON configs.
"""

from .convex import (
    Ball,
    Box,
    MovingConvexSet,
    Polytope,
    Translated,
    distance,
    hausdorff,
    interior_radius,
    project,
    translate,
    verify_interior_ball,
)
from .errors import (
    CovarianceNotPD,
    InfeasibleStart,
    NoConvergence,
    PolytopeNonConvergence,
    RoughSweepError,
)
from .diagnostics import (
    ConvergenceReport,
    FeasibilityReport,
    NormalConeReport,
    UniquenessReport,
    VariationBoundReport,
    convergence_study,
    declare_window_dissection,
    feasibility_report,
    normal_cone_check,
    normal_cone_tolerance,
    uniqueness_functional_rough,
    uniqueness_functional_young,
    uniqueness_tolerance,
    unperturbed_variation_bound,
    variation_bound_check,
)
from .fbm import FbmSpec, build_time_space_signal, fbm_covariance, sample_fbm, sample_fbm_ensemble
from .paths import (
    Grid,
    SamplePath,
    VariationBoundParams,
    check_control_superadditive,
    p_variation,
    p_variation_dissection,
    valadier_bound,
    variation_bound_oscillation,
    variation_bound_scheme,
)
from .rough import (
    ControlledPath,
    RoughLift,
    VectorField,
    chen_combine,
    compose_controlled,
    lift_piecewise_linear,
    rough_integral,
    young_integral,
)
from .solvers import (
    SweepingRun,
    catching_up,
    euler_catching_up,
    picard_rough,
    picard_young,
    skorokhod_decompose,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Box",
    "Polytope",
    "Translated",
    "MovingConvexSet",
    "project",
    "distance",
    "hausdorff",
    "translate",
    "interior_radius",
    "verify_interior_ball",
    "Grid",
    "SamplePath",
    "VariationBoundParams",
    "p_variation",
    "p_variation_dissection",
    "check_control_superadditive",
    "valadier_bound",
    "variation_bound_oscillation",
    "variation_bound_scheme",
    "RoughLift",
    "ControlledPath",
    "VectorField",
    "lift_piecewise_linear",
    "chen_combine",
    "young_integral",
    "rough_integral",
    "compose_controlled",
    "FbmSpec",
    "fbm_covariance",
    "sample_fbm",
    "sample_fbm_ensemble",
    "build_time_space_signal",
    "SweepingRun",
    "catching_up",
    "skorokhod_decompose",
    "euler_catching_up",
    "picard_young",
    "picard_rough",
    "FeasibilityReport",
    "VariationBoundReport",
    "NormalConeReport",
    "UniquenessReport",
    "ConvergenceReport",
    "feasibility_report",
    "declare_window_dissection",
    "variation_bound_check",
    "unperturbed_variation_bound",
    "normal_cone_check",
    "normal_cone_tolerance",
    "uniqueness_functional_young",
    "uniqueness_functional_rough",
    "uniqueness_tolerance",
    "convergence_study",
    "RoughSweepError",
    "InfeasibleStart",
    "NoConvergence",
    "PolytopeNonConvergence",
    "CovarianceNotPD",
    "__version__",
]
