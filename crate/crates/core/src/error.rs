use thiserror::Error;

/// Where in the parameter recovery pipeline a failure happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryStep {
    GlobalPhase,
    FirstColumn,
    CoreMatrix,
}

impl std::fmt::Display for RecoveryStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RecoveryStep::GlobalPhase => "global phase normalization",
            RecoveryStep::FirstColumn => "first column recovery",
            RecoveryStep::CoreMatrix => "core matrix extraction",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ||R - R^H||_F = {distance:e}")]
    NotHermitian { distance: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix is not unitary: ||U^H U - I||_F = {distance:e}")]
    NotUnitary { distance: f64 },

    #[error("matrix is not proper orthogonal: ||Q^T Q - I||_F = {distance:e}, det = {det}")]
    NotOrthogonal { distance: f64, det: f64 },

    #[error("vector is not unit: norm = {norm}")]
    NotUnit { norm: f64 },

    #[error("matrix trace is zero")]
    ZeroTrace,

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("inconsistent first column: {0}")]
    Inconsistent(String),

    #[error("core matrix structure violated: |v31| = {v31:e}")]
    StructureViolation { v31: f64 },

    #[error("{step} failed: {source}")]
    Recovery {
        step: RecoveryStep,
        #[source]
        source: Box<Error>,
    },

    #[error("recovery residual {residual:e} exceeds tolerance {tolerance:e}")]
    ToleranceExceeded { residual: f64, tolerance: f64 },

    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(step: RecoveryStep) -> impl FnOnce(Error) -> Error {
        move |e| Error::Recovery {
            step,
            source: Box::new(e),
        }
    }

    /// The innermost error, skipping recovery-step annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::Recovery { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
