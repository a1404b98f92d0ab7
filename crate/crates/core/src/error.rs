use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("relation at line {line} is not homogeneous: {msg}")]
    NonHomogeneous { line: usize, msg: String },
    #[error("degree {degree} exceeds the configured degree cap {cap}")]
    DegreeCap { degree: i64, cap: u32 },
    #[error("degree {degree} lies outside the window [{lo}, {hi}]")]
    OutOfWindow { degree: i64, lo: i64, hi: i64 },
    #[error("module is not unstable: {0}")]
    NotUnstable(String),
    #[error("module has infinite support: {0}")]
    InfiniteSupport(String),
    #[error("validity overflow in {step}: degree {degree} is beyond {valid_hi}")]
    ValidityOverflow { step: String, degree: i64, valid_hi: i64 },
    #[error("membership failure: {0}")]
    Membership(String),
    #[error("truncated differential is not well defined: {0}")]
    WellDefinedness(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
