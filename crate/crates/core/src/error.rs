use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A qubit layout violates a geometric invariant.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("unknown preset `{0}` (expected one of: paper45, collinear, perpendicular)")]
    UnknownPreset(String),

    /// A density matrix or amplitude vector failed a physicality check.
    #[error("non-physical state: {0}")]
    NonPhysical(String),

    /// The phonon mode-sum quadrature did not reach the requested accuracy.
    #[error("mode-sum quadrature did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
