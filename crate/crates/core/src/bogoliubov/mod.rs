//! Bogoliubov coefficients between right-moving in and out modes.
//!
//! `beta` is normalised as a density in the outgoing frequency `omega` and the
//! incoming frequency `omega_p`, so that `|beta|^2` integrated over `omega_p`
//! is the mean particle number in mode `omega`.

mod inner;
mod modes;
mod oracle;
mod perfect;
mod regime;
mod rl;
mod semi;

use num_complex::Complex64;

use crate::error::{require_positive, Result};

pub use modes::{phi_refl, phi_trans};
pub use oracle::beta_rr_perfect_oracle;
pub use perfect::{beta_rr_perfect_asymptotic, beta_rr_perfect_exact, beta_sq_rr_perfect};
pub use regime::{regime_check, Regime, RegimeReport};
pub use rl::beta_rl_semi;
pub use semi::{
    beta_rr_semi_asymptotic, beta_rr_semi_exact, beta_rr_semi_exact_with, beta_sq_rr_semi,
    InnerIntegral, SemiForm,
};

/// How a coefficient was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExactQuadrature,
    AsymptoticClosedForm,
    ModeOverlapOracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactQuadrature => "exact",
            Method::AsymptoticClosedForm => "asymptotic",
            Method::ModeOverlapOracle => "oracle",
        }
    }
}

/// One coefficient evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaResult {
    pub value: Complex64,
    pub abs_sq: f64,
    pub method: Method,
    /// Estimated absolute error of `value`.
    pub est_error: f64,
}

impl BetaResult {
    pub(crate) fn new(value: Complex64, method: Method, est_error: f64) -> Self {
        Self {
            value,
            abs_sq: value.norm_sqr(),
            method,
            est_error,
        }
    }

    pub(crate) fn zero(method: Method) -> Self {
        Self::new(Complex64::new(0.0, 0.0), method, 0.0)
    }

    /// Error bound on `abs_sq` implied by `est_error`.
    pub fn abs_sq_error(&self) -> f64 {
        let e = self.est_error;
        e * (2.0 * self.value.norm() + e)
    }
}

pub(crate) fn check_frequencies(omega: f64, omega_p: f64) -> Result<()> {
    require_positive("omega", omega)?;
    require_positive("omega_p", omega_p)?;
    Ok(())
}

/// `exp(i theta)`.
#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
