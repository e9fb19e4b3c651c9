//! Brute-force mode-overlap evaluation of the perfect-mirror coefficient.
//!
//! On right future null infinity the reflected in mode is `e^{-i omega' V(u)}`
//! and the out mode is `e^{-i omega u}`; their Klein-Gordon overlap reduces to
//! `beta = -(omega' / (2 pi sqrt(omega omega'))) int V'(u) e^{-i(omega u + omega' V(u))} du`.
//! The non-decaying inertial tails are cut off with error-function windows
//! wide enough that the spectral leakage is below `e^{-36}`.

use std::f64::consts::PI;

use super::{check_frequencies, cis, BetaResult, Method};
use crate::error::Result;
use crate::quadrature::{integrate_breaks, phase_breakpoints, QuadratureConfig};
use crate::special::erfc;
use crate::trajectory::MirrorTrajectory;

/// Window width in units of the inverse tail phase rate.
const WIDTH: f64 = 12.0;
/// Half-span of a window edge, in widths.
const REACH: f64 = 8.0;

pub fn beta_rr_perfect_oracle(
    omega: f64,
    omega_p: f64,
    traj: &MirrorTrajectory,
    cfg: &QuadratureConfig,
) -> Result<BetaResult> {
    check_frequencies(omega, omega_p)?;
    let u0 = traj.u0();
    let a = traj.a();
    let rate_lo = omega + omega_p;
    let rate_hi = omega + omega_p * a;
    let sig_lo = WIDTH / rate_lo;
    let sig_hi = WIDTH / rate_hi;
    let u_l = -REACH * sig_lo;
    let u_r = u0 + REACH * sig_hi;
    let start = u_l - REACH * sig_lo;
    let end = u_r + REACH * sig_hi;

    let f = |u: f64| {
        let w = if u < 0.0 {
            0.5 * erfc(-(u - u_l) / sig_lo)
        } else if u > u0 {
            0.5 * erfc((u - u_r) / sig_hi)
        } else {
            1.0
        };
        cis(-(omega * u + omega_p * traj.eval_v(u))) * (w * traj.eval_dv(u))
    };
    let phase = |u: f64| omega * u + omega_p * traj.eval_v(u);

    let cap = cfg.max_subdivisions / 8;
    let mut breaks = phase_breakpoints(start, 0.0, phase, cap);
    breaks.pop();
    let mut mid = phase_breakpoints(0.0, u0, phase, cap);
    mid.pop();
    breaks.extend(mid);
    breaks.extend(phase_breakpoints(u0, end, phase, cap));

    let r = integrate_breaks(f, &breaks, &cfg.without_hint())?
        .require_converged("mode-overlap oracle")?;
    let pre = omega_p / (2.0 * PI * (omega * omega_p).sqrt());
    let leak = (-WIDTH * WIDTH / 4.0).exp() * (1.0 / rate_lo + a / rate_hi);
    let value = -pre * r.value;
    Ok(BetaResult::new(
        value,
        Method::ModeOverlapOracle,
        pre * (r.abs_err + leak),
    ))
}

#[cfg(test)]
mod tests {
    use super::super::beta_rr_perfect_exact;
    use super::*;

    #[test]
    fn agrees_with_exact_form() {
        let cfg = QuadratureConfig::default();
        for (w, wp, u0) in [(1.0, 50.0, 30.0), (0.5, 100.0, 30.0), (0.7, 300.0, 5.0)] {
            let t = MirrorTrajectory::new(1.0, u0).unwrap();
            let o = beta_rr_perfect_oracle(w, wp, &t, &cfg).unwrap();
            let e = beta_rr_perfect_exact(w, wp, &t, &cfg).unwrap();
            assert_eq!(o.method, Method::ModeOverlapOracle);
            let d = (o.value - e.value).norm();
            assert!(d <= 10.0 * (o.est_error + e.est_error) + 1e-13, "d={d:e} ({w},{wp})");
        }
    }
}
