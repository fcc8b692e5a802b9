use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid vertex index {index} (graph has {len} vertices)")]
    InvalidVertex { index: usize, len: usize },
    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: usize, v: usize, reason: String },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("Rips graph at scale {eta} is disconnected over the discretization")]
    RipsDisconnected { eta: f64 },
    #[error("correspondence does not cover {side} index {index}")]
    NonCoveringCorrespondence { side: &'static str, index: usize },
    #[error("problem size {size} exceeds enumeration cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
