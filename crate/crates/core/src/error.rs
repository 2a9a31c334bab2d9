use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MahlerError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero input")]
    ZeroInput,
    #[error("moduli are not pairwise coprime")]
    ModuliNotCoprime,
    #[error("target has a pole at {0}")]
    TargetHasPole(String),
    #[error("class {0} is not uniform for the given function; refine the basis first")]
    NonUniformClass(String),
    #[error("all coefficients are zero")]
    AllCoefficientsZero,
    #[error("action by the zero polynomial")]
    ZeroAction,
    #[error("orbit horizon not certified within the cap for {0}")]
    HorizonUncertified(String),
    #[error("precalmness undecided: {0}")]
    Undecided(String),
    #[error("coefficients are not precalm")]
    NotPrecalm,
    #[error("coefficients are not calm: anxious pole at {0}")]
    NotCalm(String),
    #[error("radix mismatch: {0} vs {1}")]
    RadixMismatch(u64, u64),
    #[error("internal construction check failed: {0}")]
    ConstructionFailed(String),
    #[error("no nonzero solution: {0}")]
    Inconsistent(String),
    #[error("truncation too short: need {needed} coefficients, have {have}")]
    TruncationTooShort { needed: usize, have: usize },
    #[error("constant term is not one")]
    ConstantTermNotOne,
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("exponents are not powers of a single radix: {0}")]
    RadixInconsistent(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, MahlerError>;
