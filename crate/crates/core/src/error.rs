use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("not an order ideal: {0}")]
    NotAnIdeal(String),
    #[error("unsupported backend: {0}")]
    UnsupportedBackend(String),
    #[error("property {property} has no decision route on backend {backend}")]
    UnsupportedProperty { property: String, backend: String },
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("map is not order preserving: {0}")]
    NotOrderPreserving(String),
}

pub type CoreResult<T> = Result<T, CoreError>;
