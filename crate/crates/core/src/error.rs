use thiserror::Error;

/// Errors raised by the harmonic, geometry, recursion and quadrature routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the Legendre domain [-1, 1]")]
    Domain { value: f64 },

    #[error("singular harmonic evaluated at |r| = {radius:e}")]
    Singular { radius: f64 },

    #[error("degree {degree} not supported: {reason}")]
    Degree { degree: usize, reason: &'static str },

    #[error("degenerate element: {0}")]
    Degenerate(String),

    #[error("density degree {density} does not fit table degree {table}")]
    DegreeMismatch { density: usize, table: usize },

    #[error("coefficient count {got} does not match degree {degree} (expected {expected})")]
    CoefficientCount {
        degree: usize,
        expected: usize,
        got: usize,
    },

    #[error("{0}")]
    Range(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
