use thiserror::Error;

/// Everything that can go wrong across signal construction, window
/// validation, spectral operations, design, verification, and file
/// ingestion.
#[derive(Debug, Error)]
pub enum SmoothError {
    #[error("signal needs at least {min} samples, got {len}")]
    TooShort { len: usize, min: usize },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("window spans {len} taps but the signal only has {n} samples")]
    WindowTooWide { len: usize, n: usize },

    #[error("off-center window needs half-width of at least 1")]
    ZeroWidth,

    #[error("negative weight at offset {offset}")]
    NegativeWeight { offset: i64 },

    #[error("weights sum to {sum:e}, too far from 1 to renormalize")]
    NotNormalized { sum: f64 },

    #[error("weights at offsets +{offset} and -{offset} differ beyond tolerance")]
    Asymmetric { offset: i64 },

    #[error("weights increase away from the center at offset {offset}")]
    NotTapered { offset: i64 },

    #[error("smoothness weight at offset 0 must be zero, got {value:e}")]
    CenterSmoothnessWeight { value: f64 },

    #[error("alpha and beta carry no mass")]
    AllZeroTheta,

    #[error("data-fidelity mass is zero, the moving mean is undefined")]
    ZeroDataMass,

    #[error("center weight is zero, the smoothing system has no unique solution")]
    DegenerateCenterWeight,

    #[error("kernel has no off-center coefficient, there is no smoothing term")]
    NoSmoothingTerm,

    #[error("signal lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dense verification is capped at {max} samples, got {n}")]
    TooLargeForOracle { n: usize, max: usize },

    #[error("elimination hit a vanishing pivot in column {column}")]
    SingularSystem { column: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid weights file: {0}")]
    MalformedWeights(String),
}

pub type Result<T> = std::result::Result<T, SmoothError>;
