use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// Vacuum or cold state: a Maxwellian cannot be formed.
    #[error("degenerate macroscopic fields: {0}")]
    DegenerateFields(String),

    /// Mass of a density fell below the configured log floor.
    #[error("zero mass: log density {0} below floor {1}")]
    ZeroMass(f64, f64),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// The integrand does not decay at the growing cutoff and no asymptotic
    /// exponent was supplied to decide divergence analytically.
    #[error("unknown tail: integrand does not decay at the cutoff")]
    UnknownTail,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
