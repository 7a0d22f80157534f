use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid difference cycle: {0}")]
    InvalidCycle(String),

    #[error("{lambda} is not a unit modulo {n}")]
    InvalidMultiplier { lambda: u64, n: u32 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("vertex {0} is not a vertex of the complex")]
    MissingVertex(u32),

    #[error("complex is not pure")]
    Impure,

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("not a closed surface: {0}")]
    NotASurface(String),

    #[error("invalid bipartition: one side is empty")]
    InvalidBipartition,

    #[error("complex is disconnected")]
    Disconnected,

    #[error("invalid series specification: {0}")]
    InvalidSpec(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("invalid lens parameters L({p},{q})")]
    InvalidLensParams { p: i64, q: i64 },

    #[error("registry: {0}")]
    Registry(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Registry(format!("malformed json: {e}"))
    }
}
