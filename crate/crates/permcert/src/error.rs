//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by matrix validation, solvers, and oracles.
#[derive(Debug, Error)]
pub enum Error {
    /// Input matrix is not square.
    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Matrix fails the Hermitian symmetry check.
    #[error("matrix is not Hermitian: max deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// Matrix has an eigenvalue below the PSD tolerance.
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.6e} below tolerance -{tol:.3e}")]
    NotPsd { eigenvalue: f64, tol: f64 },

    /// Iterative eigensolver failed to reach its residual target.
    #[error("eigendecomposition did not converge after {sweeps} sweeps: off-diagonal residual {residual:.3e}")]
    EigNonConvergence { sweeps: usize, residual: f64 },

    /// Exact-permanent request beyond the enforced cap.
    #[error("dimension {n} exceeds the exact-permanent cap of {cap}")]
    ExactCapExceeded { n: usize, cap: usize },

    /// A linear form v_i†Pv_i fell below the numeric floor during iteration.
    #[error("linear form {index} fell below the floor {floor:.3e}")]
    FormUnderflow { index: usize, floor: f64 },

    /// Operation requires a circulant matrix.
    #[error("matrix is not circulant within tolerance {tol:.3e}")]
    NotCirculant { tol: f64 },

    /// Generic invalid argument with a human-readable reason.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Numeric failure with a human-readable reason.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
