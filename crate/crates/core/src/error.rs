use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("series context mismatch: {0}")]
    ContextMismatch(String),
    #[error("coefficient outside truncation: {0}")]
    OutsideTruncation(String),
    #[error("not divisible: {0}")]
    NonDivisible(String),
    #[error("valuation precondition violated: {0}")]
    Valuation(String),
    /// A source coefficient at hyperbolic norm `norm` (scaled by 24 in q) is needed
    /// but lies outside the source truncation.
    #[error("insufficient source order: need f(n, l) for q24 = {q24} with norm deficiency {deficiency}: {detail}")]
    InsufficientSourceOrder { q24: i64, deficiency: String, detail: String },
    #[error("ordering functional undecided on {0}")]
    OrderingUndecided(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
