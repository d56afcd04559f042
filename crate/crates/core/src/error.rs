use thiserror::Error;

/// Errors raised by the packing library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rect {id}: dimensions ({w}, {h}) must lie in (0, 1]")]
    InvalidRect { id: u64, w: f64, h: f64 },

    #[error("duplicate rect id {0}")]
    DuplicateId(u64),

    #[error("item {index}: size {size} must lie in (0, 1]")]
    InvalidSize { index: usize, size: f64 },

    #[error("invalid Super Harmonic parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("exact oracle accepts at most {max} items, got {n}")]
    TooManyItems { n: usize, max: usize },

    #[error("pattern set exceeds cap {cap} (volume estimate ~{estimate:.3e} patterns)")]
    PatternCapExceeded { cap: usize, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
