use thiserror::Error;

/// Errors produced by the estimators and their supporting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("scatter matrix is singular")]
    SingularScatter,

    #[error("data is affinely degenerate: every candidate subset has zero volume")]
    DegenerateData,

    #[error("input values are not sorted in nondecreasing order")]
    UnsortedInput,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate at sample {0}")]
    NonFinite(usize),

    #[error("could not place cluster centers after {0} attempts")]
    PlacementFailed(usize),

    #[error("missing ground truth for target {0}")]
    MissingGroundTruth(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
