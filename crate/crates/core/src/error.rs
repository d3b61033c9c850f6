use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("incompatible ring flags: {0}")]
    RingMismatch(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("value is zero within the stored precision")]
    ZeroWithinPrecision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("ramified operation not supported: {0}")]
    UnsupportedRamification(String),
    #[error("Frobenius matrix is not invertible at the stored precision")]
    SingularFrobenius,
    #[error("window is empty after the operation")]
    EmptyWindow,
    #[error("index {0} lies outside the window")]
    WindowMiss(i64),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("unsupported module: {0}")]
    UnsupportedModule(String),
    #[error("bad weight k = {0}")]
    BadWeight(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("parameter is not crystalline")]
    NotCrystallineParameter,
    #[error("support leaves the radius bound {0}")]
    RadiusOverflow(u32),
    #[error("not a valid semisimple input: {0}")]
    NotSemisimpleInput(String),
    #[error("residue field too small: {0}")]
    ResidueFieldTooSmall(String),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }
}
