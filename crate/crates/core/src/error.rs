use thiserror::Error;

/// Errors produced by the relation engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource cap exceeded: {what} needs {requested}, cap is {cap} (raise via TRACE_RELATIONS_CAP)")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("kernel not reproducible after {attempts} sampling rounds: {detail}")]
    NonReproducibleKernel { attempts: usize, detail: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
