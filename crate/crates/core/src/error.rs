use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DceError {
    /// A physical or numerical parameter is outside its allowed domain.
    #[error("parameter `{name}` = {value} is out of domain: {reason}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// r(omega), s(omega) at omega = alpha = 0, where the two iterated limits disagree.
    #[error("scattering coefficients are singular at omega = alpha = 0")]
    SingularCoefficient,

    /// Log-gamma evaluated at a non-positive integer.
    #[error("log-gamma pole at z = {0}")]
    Pole(f64),

    /// A non-positive base handed to a real-base complex power.
    #[error("complex power needs a positive base, got {0}")]
    Branch(f64),

    /// Semi-infinite integral with a non-integrable tail.
    #[error("tail exponent {0} <= 1 gives a divergent tail")]
    DivergentTail(f64),

    /// Adaptive quadrature hit its subdivision budget before meeting tolerance.
    #[error("{context}: no convergence (estimated error {abs_err:e} after {evaluations} evaluations)")]
    NonConvergence {
        context: &'static str,
        abs_err: f64,
        evaluations: usize,
    },

    /// Least-squares fit could not be carried out.
    #[error("fit failure: {0}")]
    FitFailure(String),

    /// Input data violates an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, DceError>;

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DceError::ParameterDomain {
            name,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(DceError::ParameterDomain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}
