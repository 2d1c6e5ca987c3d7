use thiserror::Error;

/// Errors produced by the state-assignment library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: generator construction requires d >= 2")]
    InvalidDimension(usize),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid plane: axes must be two distinct indices in 1..=8, got ({0}, {1})")]
    InvalidPlane(usize, usize),
    #[error("degenerate marginal: the grid carries no prior mass")]
    DegenerateMarginal,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty body: no sample fell inside the Bloch body")]
    EmptyBody,
    #[error("degenerate evidence: the normalizing integral is not positive")]
    DegenerateEvidence,
    #[error("internal consistency violation: {0}")]
    Internal(String),
    #[error("symmetry not applicable: {0}")]
    SymmetryNotApplicable(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("invalid smearing kernel: {0}")]
    InvalidKernel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
