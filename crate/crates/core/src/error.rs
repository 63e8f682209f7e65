use thiserror::Error;

/// Every failure the planning toolkit can report.
///
/// All variants are domain or validation failures; I/O lives in the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("samples-per-class below one: K={k} exceeds N={n}")]
    SamplesPerClassBelowOne { n: u64, k: u64 },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("delta must lie in (0, 1), got {0}")]
    DeltaOutOfRange(f64),

    #[error("invalid constant {what}: {value}")]
    InvalidConstant { what: &'static str, value: f64 },

    #[error("monotone regime, no interior optimum (A={a}, B={b})")]
    MonotoneRegime { a: f64, b: f64 },

    #[error("underdetermined: need at least 3 distinct design points, got {0}")]
    Underdetermined(usize),

    #[error("singular design: duplicate class-to-sample ratio x={0}")]
    SingularDesign(f64),

    #[error("ill-conditioned design: condition estimate {0:e} exceeds 1e12")]
    IllConditioned(f64),

    #[error("mixed N: records span N={0} and N={1}")]
    MixedN(u64, u64),

    #[error("mixed task: records span task {0:?} and {1:?}")]
    MixedTask(String, String),

    #[error("no records supplied")]
    EmptyRecords,

    #[error("target size infeasible for this inventory: N={n} needs at least {k_min} classes, at most {k_max} available")]
    Infeasible { n: u64, k_min: u64, k_max: u64 },

    #[error("K={k} exceeds the {available} classes in the inventory")]
    TooManyClasses { k: u64, available: u64 },

    #[error("class {class:?} has {available} samples, allocation needs {needed}")]
    ClassShort {
        class: String,
        needed: u64,
        available: u64,
    },

    #[error("budget chain must be non-empty and strictly ascending")]
    BadBudgetChain,

    #[error("union_unique accounting requires full manifests")]
    UnionNeedsManifests,

    #[error("no builds to account for")]
    EmptyBuilds,

    #[error("need at least K={k} points, got {points}")]
    TooFewPoints { k: usize, points: usize },

    #[error("point {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no feasible (N, K) cell in the experiment grid")]
    EmptyGrid,
}

impl Error {
    /// Stable machine-readable identifier for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SamplesPerClassBelowOne { .. } => "samples_per_class_below_one",
            Error::NonPositive { .. } => "non_positive",
            Error::DeltaOutOfRange(_) => "delta_out_of_range",
            Error::InvalidConstant { .. } => "invalid_constant",
            Error::MonotoneRegime { .. } => "monotone_regime",
            Error::Underdetermined(_) => "underdetermined",
            Error::SingularDesign(_) => "singular_design",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::MixedN(..) => "mixed_n",
            Error::MixedTask(..) => "mixed_task",
            Error::EmptyRecords => "empty_records",
            Error::Infeasible { .. } => "infeasible",
            Error::TooManyClasses { .. } => "too_many_classes",
            Error::ClassShort { .. } => "class_short",
            Error::BadBudgetChain => "bad_budget_chain",
            Error::UnionNeedsManifests => "union_needs_manifests",
            Error::EmptyBuilds => "empty_builds",
            Error::TooFewPoints { .. } => "too_few_points",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::EmptyGrid => "empty_grid",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
