use thiserror::Error;

use crate::mp::MpComplex;
use crate::solver::RootSequence;

#[derive(Debug, Error)]
pub enum RpmError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported singularity at the origin: 1 + 4*mu*v0 = {discriminant} < 0")]
    UnsupportedSingularity { discriminant: String },

    #[error("need coefficients up to index {needed}, have {available}")]
    Length { needed: usize, available: usize },

    #[error("trial energy coincides with the deflated root; re-seed away from {location}")]
    DeflationPoint { location: String },

    #[error("Newton iteration did not converge after {iterations} steps (last iterate {last:.30})")]
    NonConvergence { iterations: usize, last: MpComplex },

    #[error("precision exhausted: {requested} bits requested, cap is {max} bits")]
    Precision { requested: u32, max: u32 },

    #[error("spurious-root structure: slope {slope:.4} is not within 0.2 of an integer")]
    Structure { slope: f64 },

    #[error("lambda = {lambda} sits on the stationary-point boundary 2/27")]
    Boundary { lambda: String },

    #[error("sequence d={d} aborted at D={dimension} after {} entries: {source}", partial.entries.len())]
    Sequence {
        d: usize,
        dimension: usize,
        partial: Box<RootSequence>,
        #[source]
        source: Box<RpmError>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl RpmError {
    /// The underlying cause once sequence wrappers are peeled off.
    pub fn root_cause(&self) -> &RpmError {
        match self {
            RpmError::Sequence { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, RpmError>;
