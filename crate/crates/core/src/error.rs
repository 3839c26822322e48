use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument out of domain ({detail})")]
    Domain { what: &'static str, detail: String },

    #[error("{what}: pole at {at}")]
    Pole { what: &'static str, at: f64 },

    #[error("{what}: truncation budget of {terms} terms exhausted, tail estimate {tail_estimate:e}")]
    TruncationBudget {
        what: &'static str,
        terms: u64,
        tail_estimate: f64,
    },

    #[error("{what}: requested size {requested} exceeds limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("{what}: no candidate matches the oracle ({detail})")]
    IdentityMismatch { what: &'static str, detail: String },

    #[error("{what}: neither a support bound nor a decay bound was declared")]
    UndeclaredDecay { what: &'static str },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("identity `{id}`: {detail}")]
    Schema { id: String, detail: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        what,
        detail: detail.into(),
    }
}
