use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("quiver has no vertices")]
    EmptyQuiver,
    #[error("inverted window range [{min}, {max}]")]
    InvertedRange { min: i64, max: i64 },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("multiple arrows {0} -> {1}")]
    MultipleArrows(String, String),
    #[error("translation is not injective: {0} has two preimages")]
    TauNotInjective(String),
    #[error("invalid parameters n = {n}, p = {p} (need n >= 3, p >= 1)")]
    InvalidParams { n: u32, p: u32 },
    #[error("level {0} is not one of 0, 0bar")]
    NotZeroLevel(String),
    #[error("invalid level {level} for type D_{n}")]
    InvalidLevel { level: String, n: u32 },
    #[error("vertex label {label} out of range 1..={max}")]
    LabelOutOfRange { label: u32, max: u32 },
    #[error("invalid tagged edge {0}")]
    InvalidEdge(String),
    #[error("fundamental domain index {k} out of range 1..={p}")]
    DomainIndexOutOfRange { k: u32, p: u32 },
    #[error("hammock from {from} does not vanish before the window boundary")]
    WindowTooSmall { from: String },
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
