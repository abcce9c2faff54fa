use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group {0} is empty")]
    EmptyGroup(u8),

    #[error("no events in the pooled sample")]
    NoEvents,

    #[error("degenerate null variance: {0}")]
    DegenerateVariance(String),

    #[error("degenerate expected count: {0}")]
    DegenerateExpectation(String),

    #[error("calibration failed: {0}")]
    CalibrationFailure(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("scenario configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for the per-replication failures that the Monte Carlo engine
    /// counts as degenerate rather than propagating.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateVariance(_) | Error::DegenerateExpectation(_) | Error::NoEvents
        )
    }
}
