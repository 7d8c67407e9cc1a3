use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coincident points: {0} and {1}")]
    CoincidentPoints(usize, usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),

    #[error("classification undefined: {0}")]
    ClassificationUndefined(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("retry cap exceeded after {0} attempts")]
    RetryCapExceeded(usize),

    #[error("unknown fixture: {0}")]
    UnknownFixture(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("drawing is not plane: edges {0:?} and {1:?} cross")]
    NotPlane((usize, usize), (usize, usize)),
}

pub type Result<T> = std::result::Result<T, Error>;
