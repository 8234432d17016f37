use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("segments {0} and {1} intersect")]
    OverlappingScene(usize, usize),
    #[error("vertex counts differ: {0} vs {1}")]
    ShapeMismatch(usize, usize),
    #[error("coloring is incomplete: {0} of {1} vertices assigned")]
    IncompleteColoring(usize, usize),
    #[error("{0} vertices exceed the enumeration cap of {1}")]
    TooLargeToEnumerate(usize, usize),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("could not reach general position within the perturbation schedule")]
    PerturbationFailed,
    #[error("corrupt witness: {0}")]
    CorruptWitness(String),
    #[error("graph is not 4-regular: {0}")]
    NotFourRegular(String),
    #[error("layout has crossing corridors: {0}")]
    CrossingLayout(String),
    #[error("bad corridor chain length: {0}")]
    BadChainLength(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag used in CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::Validation(_) => "Validation",
            Error::InvalidPolygon(_) => "InvalidPolygon",
            Error::DuplicatePoint(_) => "DuplicatePoint",
            Error::OverlappingScene(..) => "OverlappingScene",
            Error::ShapeMismatch(..) => "ShapeMismatch",
            Error::IncompleteColoring(..) => "IncompleteColoring",
            Error::TooLargeToEnumerate(..) => "TooLargeToEnumerate",
            Error::BadParameter(_) => "BadParameter",
            Error::PerturbationFailed => "PerturbationFailed",
            Error::CorruptWitness(_) => "CorruptWitness",
            Error::NotFourRegular(_) => "NotFourRegular",
            Error::CrossingLayout(_) => "CrossingLayout",
            Error::BadChainLength(_) => "BadChainLength",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
