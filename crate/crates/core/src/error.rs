use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid multidegree {coords:?}: {reason}")]
    InvalidMultiDegree { coords: Vec<i64>, reason: String },

    #[error("{coords:?} is not in the affine monoid of {config}")]
    NotInMonoid { coords: Vec<i64>, config: String },

    #[error("cannot parse configuration descriptor {0:?} (expected segre:n1,..,nd or veronese:n,a)")]
    Descriptor(String),

    #[error("complex enumerated to dimension {cap}, but dimension {requested} was requested")]
    DimensionCap { requested: isize, cap: isize },

    #[error("join of simplexes sharing vertex {0}")]
    SharedVertex(usize),

    #[error("chain of dimension {0} is not a cycle")]
    NotACycle(isize),

    #[error("chain is not supported on the complex: {0}")]
    NotSupported(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("invalid UFO: {0}")]
    InvalidUfo(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("required vanishing fails: {0}")]
    Hypothesis(String),

    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
