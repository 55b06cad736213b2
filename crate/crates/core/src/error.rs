use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a map (a pole, or a point off the disk).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A root finder or verification step did not reach its tolerance.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// An iteration oracle ran out of steps before deciding.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
