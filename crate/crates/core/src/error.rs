use thiserror::Error;

/// Errors produced by the library. Each variant maps onto one CLI exit code
/// class (see [`ThueError::exit_code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThueError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rejected input: {0}")]
    RejectedInput(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("precision failure: {0}")]
    PrecisionFailure(String),
    #[error("undecidable at precision {bits} bits: {what}")]
    Undecidable { bits: u32, what: String },
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("factorization failure: {0}")]
    FactorizationFailure(String),
    #[error("generators are rank deficient")]
    RankDeficient,
    #[error("duplicate prime {0} in congruence constraints")]
    DuplicatePrime(String),
    #[error(
        "no local factor reaches v_p(F) = {required} at p = {p} (best {best}, proven lower bound {proven})"
    )]
    NoWitness {
        p: String,
        required: u32,
        best: u32,
        proven: i64,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl ThueError {
    /// Process exit code for this error class: 2 hypothesis or side condition,
    /// 3 budget, 4 precision, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            ThueError::HypothesisViolated(_) | ThueError::Domain(_) | ThueError::NoWitness { .. } => 2,
            ThueError::BudgetExceeded(_) | ThueError::FactorizationFailure(_) => 3,
            ThueError::PrecisionFailure(_)
            | ThueError::Undecidable { .. }
            | ThueError::PrecisionTooLow(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, ThueError>;
