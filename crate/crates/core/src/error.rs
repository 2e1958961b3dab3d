use thiserror::Error;

/// Errors produced by the dismantling library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no edges")]
    NoEdges,

    #[error("component too small to bisect (size {0})")]
    ComponentTooSmall(usize),

    #[error("degenerate spectrum")]
    DegenerateSpectrum,

    #[error("invalid cost vector: {0}")]
    InvalidCosts(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty report")]
    EmptyReport,

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("ensemble member {index} failed: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// A library invariant did not hold. Indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        match self {
            Error::Invariant(_) | Error::DegenerateSpectrum => true,
            Error::Member { source, .. } => source.is_internal(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
