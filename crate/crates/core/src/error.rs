use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} exceeds the supported range")]
    ModulusTooLarge(u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("lambda must exceed 1, got {0}")]
    InvalidLambda(f64),
    #[error("summation range N + L = {0} exceeds 2^40")]
    RangeTooLarge(u64),
    #[error("Taylor reduction hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("requested eps {eps:e} is unreachable (rounding budget {budget:e})")]
    PrecisionUnreachable { eps: f64, budget: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("|t| = {0} is below 200")]
    TBelow200(f64),
    #[error("negative radicand {0} in closed-form bound")]
    NegativeRadicand(f64),
    #[error("{0} is not a sixth power")]
    NotSixthPower(u64),
    #[error("t must be positive, got {0}")]
    NonpositiveT(f64),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
