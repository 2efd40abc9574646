//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The cubic discriminant is negative beyond tolerance, so a pair of
    /// roots is genuinely complex. A Hermitian-derived characteristic
    /// polynomial can never do this.
    #[error("complex roots detected: cubic discriminant {discriminant:.3e} < -{tolerance:.1e}")]
    ComplexRootsDetected { discriminant: f64, tolerance: f64 },

    #[error("matrix is not Hermitian: max|A - adj(A)| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("time {t} outside ramp range [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },

    /// The middle invariant root collides with an outer one, so the
    /// recurrent branch is not isolated (e.g. g = 1 at theta = pi/2).
    #[error("degenerate middle root: gap {gap:.3e} below {tolerance:.1e}")]
    DegenerateMiddleRoot { gap: f64, tolerance: f64 },

    #[error("cyclic operation requires gamma > 0")]
    NonCyclic,

    #[error("degenerate drive: effective coupling kappa = 0")]
    DegenerateDrive,

    #[error("norm drift {drift:.3e} exceeds tolerance {tolerance:.3e}")]
    NormDriftExceeded { drift: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
