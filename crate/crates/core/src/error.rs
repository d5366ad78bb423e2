use thiserror::Error;

use crate::homeo::InvariantViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("circle point {0} is outside [0, 1)")]
    PointOutOfRange(String),
    #[error("cyclic order needs three distinct points")]
    CoincidentPoints,
    #[error("invalid PL homeomorphism: {0}")]
    Invariant(#[from] InvariantViolation),
    #[error("invalid exotic parameters: {0}")]
    ExoticParams(String),
    #[error("map has no fixed point")]
    NoFixedPoint,
    #[error("map is the identity")]
    IdentityMap,
    #[error("jump product is {0}, expected 1")]
    ProductNotOne(String),
    #[error("orbit graph is truncated; refusing to solve")]
    TruncatedGraph,
    #[error("invalid symbolic set: {0}")]
    InvalidSymbolicSet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("{path}: invalid PL homeomorphism: {violation}")]
    InvalidElement {
        path: String,
        violation: InvariantViolation,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}
