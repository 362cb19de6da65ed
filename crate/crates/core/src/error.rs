use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated across cycles")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("images do not form a bijection")]
    NotABijection,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not contained in the ambient group")]
    NotContained(String),
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCap { order: u128, cap: u128 },
    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("missing cache for degree {0}")]
    MissingCache(usize),
    #[error("corrupt cache: {0}")]
    CorruptCache(String),
    #[error("cache schema version {found}, expected {expected}")]
    SchemaMismatch { found: u32, expected: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
