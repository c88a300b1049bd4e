use thiserror::Error;

/// Error taxonomy for the whole crate.
///
/// The CLI maps these onto process exit codes: usage-class errors (`Parse`,
/// `Domain`, `Membership`, `Mode`, `OverrideMiss`) exit 1, `ResourceBound`
/// and `Io` exit 2, and `Integrality` / `Internal` exit 3 because they
/// indicate that a computation contradicted itself.
#[derive(Debug, Error)]
pub enum Error {
    /// A textual group spec, cycle list, or target vector failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Input outside the mathematical domain of an operation
    /// (e.g. an even-order group passed to the odd-order check).
    #[error("domain error: {0}")]
    Domain(String),

    /// A permutation handed in as a subgroup generator does not belong
    /// to the ambient group.
    #[error("membership error: {0}")]
    Membership(String),

    /// An enumeration exceeded a configured bound (element cache, oracle
    /// order bound, prime search ceiling).
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    /// A quantity that must be a rational integer failed its divisibility
    /// or integrality check.
    #[error("integrality error: {0}")]
    Integrality(String),

    /// An internal cross-check failed; this is a bug, not a user error.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// The Schur index override table has no entry for the requested group.
    #[error("schur override table miss: {0}")]
    OverrideMiss(String),

    /// The requested output is unavailable in the current annotation mode
    /// (e.g. exact achievable jump sets under lower-bound Schur data).
    #[error("mode error: {0}")]
    Mode(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for an internal consistency failure.
    pub fn internal(msg: impl Into<String>) -> Error {
        Error::Internal(msg.into())
    }

    /// Process exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::Domain(_)
            | Error::Membership(_)
            | Error::Mode(_)
            | Error::OverrideMiss(_) => 1,
            Error::ResourceBound(_) | Error::Io(_) => 2,
            Error::Integrality(_) | Error::Internal(_) => 3,
        }
    }
}
