use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("group mismatch")]
    GroupMismatch,
    #[error("2 is not invertible in this ring")]
    TwoNotInvertible,
    #[error("the prime 2 is not supported")]
    PrimeTwo,
    #[error("generators do not close under the group law")]
    NotASubgroup,
    #[error("not a character: value map fails relations")]
    NotACharacter,
    #[error("p divides the order of the character")]
    WildCharacter,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("non-zero-divisor expected: {0}")]
    ZeroDivisor(String),
    #[error("matrix shape: {0}")]
    MatrixShape(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("ideal is not principal at working precision")]
    NotPrincipal,
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unramified place required for iota")]
    RamifiedIota,
    #[error("setting shape: {0}")]
    Setting(String),
    #[error("bound exhausted: need coefficients beyond the truncation bound")]
    BoundExhausted,
    #[error("family inconsistent at working bound: {0}")]
    Family(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, CsError>;
