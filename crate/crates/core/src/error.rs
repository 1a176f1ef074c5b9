use num_bigint::BigUint;
use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes: domain,
/// precondition and parse problems are user errors; budget refusals are a
/// distinct, recoverable category; internal inconsistencies indicate a bug
/// and abort the computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0} (supported: 1..=4)")]
    UnsupportedDimension(usize),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("{0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("face parametrization failed: {0}")]
    FaceParametrization(String),

    #[error(
        "enumeration budget exceeded: job requires {required} torus evaluations \
         ({per_sum} for the largest single sum) but the per-sum budget is {budget}{}",
        feasible_note(*.largest_feasible_k)
    )]
    EnumerationBudget {
        /// Total evaluations the whole job would need.
        required: BigUint,
        /// Evaluations needed by the largest single power sum.
        per_sum: BigUint,
        /// Configured per-sum budget.
        budget: u64,
        /// Largest k for which S_k alone fits the budget, if any.
        largest_feasible_k: Option<u32>,
    },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn feasible_note(k: Option<u32>) -> String {
    match k {
        Some(k) => format!("; largest feasible truncation is k <= {k}"),
        None => "; no single sum fits the budget".to_string(),
    }
}

impl Error {
    /// Exit code the CLI should use for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EnumerationBudget { .. } => 3,
            Error::InternalInconsistency(_) => 4,
            Error::Io { .. } => 2,
            _ => 2,
        }
    }
}
