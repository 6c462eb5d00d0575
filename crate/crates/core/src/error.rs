use thiserror::Error;

/// Errors raised by the analytic solver and its supporting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is singular: smallest eigenvalue {min_eigenvalue:e} is below {threshold:e}")]
    SingularOperator { min_eigenvalue: f64, threshold: f64 },

    #[error("operator is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("states are indistinguishable in this formalism: C1 + C2 = {sum:.15} <= 1")]
    DegenerateEnsemble { sum: f64 },

    #[error("average state is singular: smallest eigenvalue {min_eigenvalue:e}")]
    SingularRho0 { min_eigenvalue: f64 },

    #[error("barred POVM does not sum to the average state (residual {residual:e})")]
    CompletenessViolation { residual: f64 },

    #[error("failure rate {q} lies outside the boundary interval [{lo}, {hi}]")]
    QOutOfInterval { q: f64, lo: f64, hi: f64 },

    #[error("epsilon {epsilon} outside the admissible range [{lo}, {hi}]")]
    EpsilonOutOfRange { epsilon: f64, lo: f64, hi: f64 },

    #[error("failure rate {0} outside [0, 1)")]
    QOutOfRange(f64),

    #[error("closed-form evaluation undefined at inconclusive degree {q}: {reason}")]
    DomainError { q: f64, reason: &'static str },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("bisection bracket does not straddle {target}: P_I ranges over [{lo}, {hi}]")]
    BracketFailure { target: f64, lo: f64, hi: f64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
