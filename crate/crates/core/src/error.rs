use alloc::string::String;
use num_complex::Complex64 as C64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {at}")]
    Pole { at: C64 },
    #[error("z = {z} is (near-)spectral: resolvent solve is singular to working precision")]
    Singular { z: C64 },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },
    #[error("overflow: power T^{power} has non-finite entries")]
    Overflow { power: usize },
    #[error("precision: achieved bound {achieved:e} exceeds requested {requested:e}")]
    Precision { achieved: f64, requested: f64 },
    #[error("not power bounded: spectral radius {spectral_radius} exceeds 1")]
    NotPowerBounded { spectral_radius: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent representation: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Domain(_) | Error::Unsupported(_) | Error::Inconsistent(_)
        )
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
