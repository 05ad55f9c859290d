use thiserror::Error;

/// Errors raised by the library. Every variant is a contract violation or a
/// parse failure; none of them are transient.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero module has no generator")]
    ZeroModule,
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },
    #[error("zero polynomial has no value module")]
    ZeroPolynomial,
    #[error("not integer-valued: {0}")]
    NotIntegerValued(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("residue {residue} out of range for p^{level} with p = {p}")]
    ResidueOutOfRange { p: u64, residue: u64, level: u32 },
    #[error("cannot refine a level-{have} class down to level {want}")]
    LevelTooLow { have: u32, want: u32 },
    #[error("precision cap: value function not stable below level {cap}")]
    PrecisionCap { cap: u32 },
    #[error("value function is not constant on balls of level {level} (needs level {needed})")]
    NotLocallyConstant { level: u32, needed: u32 },
    #[error("ideal is not local: {0}")]
    NotLocal(String),
    #[error("family not complete over T")]
    FamilyIncomplete,
    #[error("cannot factor {0}")]
    Factorization(String),
    #[error("invalid token `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("invalid model: {0}")]
    Model(String),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
