use thiserror::Error;

/// Errors raised by constructions and checks in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("invalid simplicial set: {0}")]
    InvalidSimplicialSet(String),
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),
    #[error("family is not face compatible at simplex `{label}` (face {face})")]
    FaceIncompatible { label: String, face: usize },
    #[error("family does not vanish on the subcomplex at simplex `{label}`")]
    NotRelative { label: String },
    #[error("relation `{relation}` does not map to zero")]
    NotAHom { relation: String },
    #[error("generator count mismatch: expected {expected}, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("no extension found up to degree cap {cap}")]
    DegreeCapExceeded { cap: usize },
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("element not in the kernel: {0}")]
    Membership(String),
    #[error("index {index} out of range for {what}")]
    IndexOutOfRange { index: usize, what: String },
    #[error("incomparable levels: {0}")]
    IncomparableLevels(String),
    #[error("malformed certificate: {0}")]
    MalformedCert(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
