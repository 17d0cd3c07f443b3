use thiserror::Error;

/// Errors produced by the citation success toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("journal `{0}` has no articles")]
    EmptyDistribution(String),

    #[error("invalid value for {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("brute-force comparison needs {pairs} article pairs, limit is {limit}")]
    TooManyPairs { pairs: u128, limit: u128 },

    #[error("{0}")]
    Domain(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("duplicate journal id `{0}`")]
    DuplicateJournal(String),

    #[error("unknown journal id `{0}`")]
    UnknownJournal(String),

    #[error("synthetic generation failed for journal `{journal}`: {reason}")]
    Generation { journal: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a positive finite number",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a non-negative finite number",
        })
    }
}
