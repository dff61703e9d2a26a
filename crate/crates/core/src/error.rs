//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input to an operation (empty label, all-zero vector,
    /// arity mismatch, invalid window, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A record in a corpus or taxonomy stream violated the schema.
    #[error("schema violation at {location}: {message}")]
    Schema { location: String, message: String },

    /// Strict-mode ingestion found record-level errors.
    #[error("{0} record(s) rejected in strict mode; first: {1}")]
    StrictIngest(usize, String),

    /// A regression design ended up empty after filtering.
    #[error("empty design: {0}")]
    EmptyDesign(String),

    /// The weighted cross-product is singular even after dropping
    /// linearly dependent columns.
    #[error("collinear design: candidate columns {0:?}")]
    Collinear(Vec<String>),

    /// Logistic likelihood diverged (complete or quasi-separation).
    #[error("separation detected: {0}")]
    Separation(String),

    /// A named coefficient is missing from a fit.
    #[error("unknown coefficient: {0}")]
    UnknownCoefficient(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON parse error at {location}: {source}")]
    Json {
        location: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
