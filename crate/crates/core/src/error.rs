//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed position spaces")]
    MixedSpaces,
    #[error("duplicate endpoint between segments")]
    DuplicateEndpoint,
    #[error("degenerate position: point lies on a splitting line")]
    DegeneratePosition,
    #[error("point {0} equals a chord endpoint")]
    OnChordEndpoint(String),
    #[error("non-crossing constraint violated: edge ({0},{1}) crosses edge ({2},{3})")]
    CrossingViolation(usize, usize, usize, usize),
    #[error("point {0} is already matched")]
    AlreadyMatched(usize),
    #[error("identical endpoints: cannot match point {0} with itself")]
    IdenticalEndpoints(usize),
    #[error("unknown point id {0}")]
    UnknownPoint(usize),
    #[error("revoking is not allowed in irrevocable mode")]
    IrrevocableMode,
    #[error("edge ({0},{1}) is not in the current matching")]
    EdgeAbsent(usize, usize),
    #[error("region {0} is not active")]
    InactiveRegion(usize),
    #[error("regions {0} and {1} are not mergeable siblings")]
    NotSiblings(usize, usize),
    #[error("weight out of range: {0}")]
    WeightOutOfRange(String),
    #[error("nonpositive weight rejected: {0}")]
    NonpositiveWeight(String),
    #[error("duplicate point position: {0}")]
    DuplicatePosition(String),
    #[error("general position violated: {0}")]
    GeneralPosition(String),
    #[error("advice corrupted: {0}")]
    AdviceCorrupted(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("adversary protocol violation: {0}")]
    Protocol(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
