use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("negative loss at (label {label}, prediction {prediction})")]
    NegativeLoss { label: usize, prediction: usize },

    #[error("loss at (label {label}, prediction {prediction}) exceeds declared bound c = {bound}")]
    LossExceedsBound {
        label: usize,
        prediction: usize,
        bound: String,
    },

    #[error("duplicate hypothesis: rows {first} and {second} are identical")]
    DuplicateHypothesis { first: usize, second: usize },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("loss matrix is not {{0,1}}-valued")]
    NonZeroOneLoss,

    #[error("label or prediction {0:?} is not numeric")]
    NonNumeric(String),

    #[error("label set element {element:?} is not a prediction")]
    NotASubset { element: String },

    #[error("loss is irrational for points {0} and {1}")]
    IrrationalLoss(String, String),

    #[error("stream not ε_t-realizable: version space became empty")]
    NotRealizable,

    #[error("minimax step found no mixture below gamma (game value {value})")]
    NoSafeMixture { value: String },

    #[error("unbounded dimension: a node shatters into itself on every branch")]
    Unbounded,

    #[error("memoization budget exceeded: more than {cap} version spaces visited")]
    MemoCap { cap: usize },

    #[error("expert pool of size {size} exceeds budget {budget}")]
    PoolBudget { size: String, budget: usize },

    #[error("enumeration of 2^{requested} sequences exceeds cap 2^{cap}")]
    EnumerationCap { requested: usize, cap: usize },

    #[error("shattering adversary depth exhausted")]
    DepthExhausted,

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("round {round}: {source}")]
    Protocol {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn at_round(self, round: usize) -> Self {
        match self {
            e @ Error::Protocol { .. } => e,
            e => Error::Protocol {
                round,
                source: Box::new(e),
            },
        }
    }

    /// The innermost error, looking through round annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::Protocol { source, .. } => source.root(),
            e => e,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
