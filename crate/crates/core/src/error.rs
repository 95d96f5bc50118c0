use thiserror::Error;

/// Errors raised by the bookkeeping routines.
///
/// Variants split into two families: bad input ([`Error::is_invalid_input`])
/// and broken internal identities, which always indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must satisfy g >= 2, got {0}")]
    InvalidGenus(i64),

    #[error("rank must be at least 1, got {0}")]
    InvalidRank(i64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invariant violated: {identity} ({detail})")]
    Invariant {
        identity: &'static str,
        detail: String,
    },

    #[error("edge {edge} cannot be applied to class on {generator}")]
    InapplicableEdge { edge: String, generator: String },

    #[error("precondition failed: {0}")]
    Precondition(&'static str),
}

impl Error {
    pub(crate) fn invariant(identity: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            identity,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by an
    /// internal consistency failure.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidGenus(_)
                | Error::InvalidRank(_)
                | Error::InvalidInput(_)
                | Error::Overflow(_)
                | Error::Precondition(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
