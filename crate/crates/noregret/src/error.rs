use thiserror::Error;

/// Every failure the library can report.
///
/// Errors raised inside a game round are wrapped in [`Error::Round`] so the
/// caller can see where a run stopped; [`Error::root`] strips that wrapper.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// An adaptive weight was requested for a gradient shorter than the floor.
    #[error(
        "gradient norm {norm:e} is below the floor {floor:e}; the lower bound on \
         gradient norms that the adaptive weights rely on does not hold"
    )]
    DegenerateGradient { norm: f64, floor: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("rate fit failed: {0}")]
    Fit(String),

    /// A quantity that is nonnegative in exact arithmetic came out clearly negative.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("round {round}: {source}")]
    Round {
        round: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn at_round(self, round: usize) -> Self {
        match self {
            e @ Error::Round { .. } => e,
            e => Error::Round {
                round,
                source: Box::new(e),
            },
        }
    }

    /// The innermost error, with any round annotation removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Round { source, .. } => source.root(),
            e => e,
        }
    }

    /// Round index attached to this error, if any.
    pub fn round(&self) -> Option<usize> {
        match self {
            Error::Round { round, .. } => Some(*round),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_wrapping_is_idempotent() {
        let e = Error::Domain("x".into()).at_round(3).at_round(9);
        assert_eq!(e.round(), Some(3));
        assert_eq!(e.root(), &Error::Domain("x".into()));
    }
}
