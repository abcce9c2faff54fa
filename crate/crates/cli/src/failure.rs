use std::fmt;
use std::path::Path;

/// A command failure and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or arguments (exit 2, as for clap's own usage errors).
    Usage(String),
    /// Malformed dataset or scenario file (exit 3).
    Parse(String),
    /// Reading or writing a file failed (exit 4).
    Io(String),
    /// Anything else, e.g. a calibration that does not converge (exit 1).
    Other(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Parse(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Failure::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Io(m) | Failure::Other(m) => f.write_str(m),
        }
    }
}

impl From<survcomp::Error> for Failure {
    fn from(e: survcomp::Error) -> Self {
        use survcomp::Error as E;
        let msg = e.to_string();
        match e {
            E::Parse { .. } | E::EmptyGroup(_) | E::Config(_) => Failure::Parse(msg),
            E::Io { .. } => Failure::Io(msg),
            E::InvalidArgument(_) => Failure::Usage(msg),
            _ => Failure::Other(msg),
        }
    }
}
