use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the library.
///
/// Each variant belongs to one of two families, see [`Error::exit_code`]:
/// problems with what the caller asked for (exit code 2) and numerical
/// failures encountered while computing (exit code 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "critical point {point} of the polynomial lies on the level set (||T(z*)| - 1| = {deviation:.3e})"
    )]
    CriticalPointOnLevelSet { point: Complex64, deviation: f64 },

    #[error("lemniscate fiber mismatch: components wind {found} times in total, degree is {expected}")]
    FiberMismatch { expected: usize, found: usize },

    #[error("measure is not symmetric under t -> -t: {0}")]
    Symmetry(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("curve tracing failed near {last}: {reason}")]
    Tracing { last: Complex64, reason: String },

    #[error("root finding did not converge (max residual {max_residual:.3e})")]
    RootFinding { residuals: Vec<f64>, max_residual: f64 },

    #[error("quadrature resolution: panel of width {width:.3e} is below the representable limit")]
    Resolution { width: f64 },

    #[error("orthonormalization broke down at degree {achieved} (requested {requested}); increase nodes or precision")]
    Degeneracy { requested: usize, achieved: usize },

    #[error("non-finite value at quadrature node {index}")]
    NonFinite { index: usize },

    #[error("numeric overflow evaluating orthonormal polynomials at {z:.6e}")]
    Overflow { z: Complex64 },

    #[error("Christoffel kernel {value:.3e} below the representable range")]
    KernelUnderflow { value: f64 },

    #[error("extrapolation needs at least {needed} successful rows, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for input problems, 3 for numeric ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::Parse { .. }
            | Error::Domain(_)
            | Error::CriticalPointOnLevelSet { .. }
            | Error::Symmetry(_)
            | Error::Capability(_)
            | Error::Io(_) => 2,
            Error::FiberMismatch { .. }
            | Error::Tracing { .. }
            | Error::RootFinding { .. }
            | Error::Resolution { .. }
            | Error::Degeneracy { .. }
            | Error::NonFinite { .. }
            | Error::Overflow { .. }
            | Error::KernelUnderflow { .. }
            | Error::InsufficientData { .. } => 3,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
