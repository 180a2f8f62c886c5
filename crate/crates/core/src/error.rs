use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid geometries differ")]
    GeometryMismatch,
    #[error("column {0} is not a contiguous run")]
    NonConvexColumn(usize),
    #[error("coarse box does not contain the set")]
    CoverageError,
    #[error("grid has {cells} cells, limit is {limit}")]
    TooLarge { cells: usize, limit: usize },
    #[error("profile mass is zero")]
    ZeroMass,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("polygonal chain is not simple: {0}")]
    NonSimpleChain(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI on stderr.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::GeometryMismatch => "GEOMETRY_MISMATCH",
            Error::NonConvexColumn(_) => "NON_CONVEX_COLUMN",
            Error::CoverageError => "COVERAGE",
            Error::TooLarge { .. } => "TOO_LARGE",
            Error::ZeroMass => "ZERO_MASS",
            Error::PreconditionViolated(_) => "PRECONDITION",
            Error::NonSimpleChain(_) => "NON_SIMPLE_CHAIN",
            Error::Parse { .. } => "PARSE",
            Error::Io(_) => "IO",
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
