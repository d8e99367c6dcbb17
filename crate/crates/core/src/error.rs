//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An input failed a precondition check.
    #[error("validation error: {0}")]
    Validation(String),

    /// Requested more codewords than the alphabet product supports.
    #[error("capacity {requested} exceeds product size {available}")]
    CapacityExceeded { requested: usize, available: usize },

    /// Two codewords in a set are identical.
    #[error("duplicate codeword at indices {first} and {second}")]
    DuplicateCodeword { first: usize, second: usize },

    /// Hamming distance over fewer than two codewords is undefined.
    #[error("minimum distance undefined: need at least 2 codewords, got {0}")]
    UndefinedDistance(usize),

    /// Two stored pairs share the same key codeword.
    #[error("duplicate key codeword at pairs {first} and {second}")]
    DuplicateKey { first: usize, second: usize },

    /// A codeword token has no embedding.
    #[error("token {0:?} not present in embedding table")]
    UnknownToken(String),

    /// A query or input vector is identically zero.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Power iteration produced a zero vector (query orthogonal to range).
    #[error("operator maps the iterate to zero; query is orthogonal to the operator range")]
    NullIterate,

    /// Lookup against a bank holding no pairs.
    #[error("memory bank is empty")]
    EmptyMemory,

    /// A stored-pair query codeword was never stored.
    #[error("query codeword {0:?} is not among the stored pairs")]
    UnknownQuery(String),

    /// Coherence trace shows no measurable decay.
    #[error("coherence trace does not decay; decode horizon is unbounded")]
    InfiniteHorizon,

    /// A value fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Fewer qualifying hypertoken symbols than requested.
    #[error("insufficient hypertoken symbols: found {found}, need {need}")]
    InsufficientSymbols { found: usize, need: usize },

    /// A chat endpoint failed in a way that aborts the run.
    #[error("endpoint error: {0}")]
    Endpoint(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad inputs rather than I/O or endpoints.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Json(_) | Error::Endpoint(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
