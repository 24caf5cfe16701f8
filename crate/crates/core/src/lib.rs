//! Certified bounds on the radius of robust feasibility of uncertain linear
//! conic programs under ball uncertainty.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod io;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod svm;

pub use bounds::{
    gap_ratio, rrf_bounds, rrf_bounds_with_base, rrf_exact_lp, Diagnostic, LpRadius, RrfReport,
};
pub use error::{Error, Result};
pub use geometry::{
    base_constants, eigh, l1_extremes, lmo, membership, project, project_simplex, sample_extreme,
    BaseConstants,
};
pub use model::{
    natural_base, smat, svec, validate_problem, BaseKind, CompactBaseSpec, ConeKind,
    NominalProblem, SvecMap, UncertaintyRadii,
};
pub use oracle::{
    admissibility_probe, is_robust_feasible, rrf_estimate, slater_margin, worst_case_margin,
    FeasibilityStatus, FeasibilityVerdict, OracleConfig, RrfEstimate,
};
pub use solver::{
    epigraph_distance, exact_line_search, reduced_objective, DistanceResult, FrankWolfe,
    SolverConfig,
};
pub use svm::{
    lift_svm, separability_radius, verify_separation, LiftedProblem, SeparabilityRadius,
    TrainingSet,
};
