use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Fock dimension {0} (need at least 2)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("truncation inadequate: load {load} exceeds dim/4 = {limit}")]
    Truncation { load: f64, limit: f64 },

    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensity(&'static str),

    #[error("operator is not Hermitian (max defect {0:e})")]
    NotHermitian(f64),

    #[error("invalid quadrature grid: {0}")]
    InvalidGrid(&'static str),

    #[error("Glauber P-distribution is a delta function at n_th = 0")]
    DeltaDistribution,

    #[error("postselection probability {0:e} too small; weak value undefined")]
    UndefinedWeakValue(f64),

    #[error("observable has no phase-space symbol; momentum-basis representation unavailable")]
    NoPhaseSpaceSymbol,

    #[error("closed form not available for these parameters")]
    ClosedFormUnavailable,

    #[error("unsupported combination: {0}")]
    Unsupported(&'static str),

    #[error("custom basis columns are not orthonormal (defect {0:e})")]
    NotOrthonormal(f64),

    #[error("postselection value {0} is not a row of the outcome table")]
    NotOnGrid(f64),

    #[error("pointer carries a current density of {0:e}")]
    PointerCurrent(f64),

    #[error("coupling epsilon must be nonzero to extract a shift")]
    ZeroCoupling,

    #[error("eigendecomposition did not converge")]
    NoConvergence,
}
