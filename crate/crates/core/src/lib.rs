//! Planning supervised pre-training datasets around the class-to-sample ratio.
//!
//! At a fixed dataset size `N`, downstream error follows a convex law in the
//! ratio `x = K/n` between the number of classes and samples per class. Its
//! minimizer `x̄ = B²/A²` does not depend on `N`, so a three-point pilot fit at
//! small `N` predicts the best class count `K̄ = √(x̄·N)` for any larger build.
//!
//! - [`scaling_law`]: bound formulas and the analytic optimum.
//! - [`fitting`]: least-squares estimation of the ratio law.
//! - [`planner`]: class-count selection methods and sample accounting.
//! - [`composer`]: seeded dataset manifests and cluster relabelling.
//! - [`simulator`]: synthetic oracles for end-to-end checks.

pub mod composer;
pub mod error;
pub mod fitting;
pub mod planner;
pub mod rng;
pub mod scaling_law;
pub mod simulator;

pub use composer::{
    cluster_relabel, compose_manifest, nested_compose, ClassInventory, DatasetManifest,
    LabeledPointSet,
};
pub use error::{Error, Result};
pub use fitting::{fit_from_records, fit_ratio_law, FitReport, Observation, ObservationSet};
pub use planner::{
    account_samples, feasible_k_range, plan_emp_optimal, plan_extrapolation, plan_from_ratio,
    plan_grid_search, plan_standard, plan_theo_optimal, Build, ClassBudget, DedupMode, Method,
    PerformanceRecord, PlanResult, SampleAccount,
};
pub use scaling_law::{
    eval_bound, eval_ratio_law, optimal_classes, optimal_ratio, predicted_min_error,
    theorem1_bound, theorem2_bound, BoundTerms, DiversityPoint, RatioLaw, Theorem1Constants,
    Theorem2Constants,
};
pub use simulator::{
    evaluate_planner, simulate_records, sweep_tradeoff, ExperimentGrid, OracleKind, OracleSpec,
    PilotDesign, PlannerEvaluation, TradeoffRow,
};
