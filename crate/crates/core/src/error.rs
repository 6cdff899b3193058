use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: weighted edges are not supported (expected two tokens, found {tokens})")]
    WeightedEdge { line: usize, tokens: usize },

    #[error("graph has no edges after removing self-loops and duplicates")]
    EmptyGraph,

    #[error("unknown node label `{0}`")]
    UnknownNode(String),

    #[error("{missing} node(s) have no community label, first missing: `{first}`")]
    MissingLabels { missing: usize, first: String },

    #[error("node `{0}` has conflicting community labels")]
    ConflictingLabel(String),

    #[error("dimension mismatch: expected {expected} rows, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("row {0} is zero and cannot be projected onto the unit sphere")]
    ZeroRow(usize),

    #[error("node {0} has zero degree")]
    ZeroDegree(usize),

    #[error("cannot sample {requested} items out of {available}")]
    TooManySamples { requested: usize, available: usize },

    #[error("label {label} out of range for {nodes} nodes")]
    LabelOutOfRange { label: usize, nodes: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("singular value decomposition failed: {0}")]
    Svd(String),

    #[error("{0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures of the numerical pipeline, as opposed to bad input or IO.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroRow(_) | Error::NonFinite(_) | Error::Svd(_)
        )
    }
}
