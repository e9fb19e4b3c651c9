//! Which closed form, if any, applies at a parameter point.

use super::check_frequencies;
use crate::error::Result;
use crate::scattering::ScatteringParams;
use crate::trajectory::MirrorTrajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `omega' << alpha`: Bose-Einstein closed form.
    PerfectLike,
    /// `alpha << omega'`: Fermi-Dirac closed form.
    Semitransparent,
    /// `alpha` negligible against every frequency scale.
    TransparentLike,
    /// Outside `1 << omega'/k, omega'/omega << e^{k u0}`, or `alpha ~ omega'`.
    OutOfAsymptoticWindow,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::PerfectLike => "perfect_like",
            Regime::Semitransparent => "semitransparent",
            Regime::TransparentLike => "transparent_like",
            Regime::OutOfAsymptoticWindow => "out_of_window",
        }
    }
}

/// The label together with the ratios it was decided from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub label: Regime,
    pub omega_p_over_k: f64,
    pub omega_p_over_omega: f64,
    pub omega_p_a_over_k: f64,
    pub omega_p_a_over_omega: f64,
    /// `omega' / alpha`; 0 for the perfect mirror, infinite for `alpha = 0`.
    pub omega_p_over_alpha: f64,
}

const WINDOW_LOW: f64 = 10.0;
const WINDOW_HIGH: f64 = 0.1;
const COUPLING: f64 = 0.1;
const TRANSPARENT: f64 = 1e-12;

/// Classifies a point. Precedence: window, transparent, perfect, semitransparent;
/// a point in the window with `alpha ~ omega'` is out of every closed form.
pub fn regime_check(
    omega: f64,
    omega_p: f64,
    traj: &MirrorTrajectory,
    p: &ScatteringParams,
) -> Result<RegimeReport> {
    check_frequencies(omega, omega_p)?;
    let k = traj.k();
    let a = traj.a();
    let alpha = p.alpha();
    let mut report = RegimeReport {
        label: Regime::OutOfAsymptoticWindow,
        omega_p_over_k: omega_p / k,
        omega_p_over_omega: omega_p / omega,
        omega_p_a_over_k: omega_p * a / k,
        omega_p_a_over_omega: omega_p * a / omega,
        omega_p_over_alpha: omega_p / alpha,
    };
    let in_window = report.omega_p_over_k >= WINDOW_LOW
        && report.omega_p_over_omega >= WINDOW_LOW
        && report.omega_p_a_over_k <= WINDOW_HIGH
        && report.omega_p_a_over_omega <= WINDOW_HIGH;
    report.label = if !in_window {
        Regime::OutOfAsymptoticWindow
    } else if alpha <= TRANSPARENT * omega.max(omega_p).max(k) {
        Regime::TransparentLike
    } else if omega_p / alpha <= COUPLING {
        Regime::PerfectLike
    } else if alpha / omega_p <= COUPLING {
        Regime::Semitransparent
    } else {
        Regime::OutOfAsymptoticWindow
    };
    Ok(report)
}
