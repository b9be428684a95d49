use thiserror::Error;

use crate::flows::Trajectory;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed mesh: {reason}")]
    MalformedMesh { reason: String },

    #[error("boundary index {index} out of range (mesh has {n} boundary components)")]
    InvalidBoundaryIndex { index: usize, n: usize },

    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("conformal factor is not admissible on edge {edge} (margin {margin:e})")]
    InadmissibleFactor { edge: usize, margin: f64 },

    #[error("symmetric eigensolve failed: {0}")]
    EigSolveFailure(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("quadrature did not converge after {refinements} refinements")]
    QuadratureStall { refinements: usize },

    #[error("step size collapsed to {h:e} at t = {t}")]
    StepCollapse {
        t: f64,
        h: f64,
        partial: Box<Trajectory>,
    },

    #[error("not enough usable samples for a decay fit ({usable} usable, need {needed})")]
    InsufficientData { usable: usize, needed: usize },

    #[error("Newton solve hit the iteration limit ({iterations}) with residual {residual:e}")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("line search failed at iteration {iteration} (residual {residual:e})")]
    LineSearchFailure { iteration: usize, residual: f64 },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn malformed(reason: impl Into<String>) -> Self {
        Error::MalformedMesh {
            reason: reason.into(),
        }
    }
}
