//! Semitransparent mirror, left-in to right-out coefficient.
//!
//! Overlap of the out mode `e^{-i omega u}` with the transmitted mode of
//! frequency `omega'` on right future null infinity. The static part
//! `u < 0` and the coasting part `u > u0` are integrated analytically with
//! the `omega -> omega - i0` prescription for the pure-phase tails; only the
//! accelerated segment is integrated numerically.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::inner::h_integral;
use super::{check_frequencies, cis, BetaResult, Method};
use crate::error::Result;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::scattering::{reflection, transmission, ScatteringParams};
use crate::trajectory::MirrorTrajectory;

pub fn beta_rl_semi(
    omega: f64,
    omega_p: f64,
    traj: &MirrorTrajectory,
    p: &ScatteringParams,
    cfg: &QuadratureConfig,
) -> Result<BetaResult> {
    check_frequencies(omega, omega_p)?;
    let alpha = p.alpha();
    if alpha == 0.0 || p.is_perfect() {
        return Ok(BetaResult::zero(Method::ExactQuadrature));
    }
    let k = traj.k();
    let u0 = traj.u0();
    let y0 = traj.sqrt_a();
    let a = traj.a();
    let b = 2.0 * alpha / k;
    let g = omega_p / k;
    let r = reflection(omega_p, p)?;
    let s = transmission(omega_p, p)?;
    let big = omega + omega_p;
    let i = Complex64::i();

    let r1 = omega_p * s / big;

    let decay = Complex64::new(0.5 * k, big);
    let r2_analytic = -i * omega_p * (1.0 - cis(-big * u0)) / (i * big)
        - alpha * (1.0 - (-decay * u0).exp()) / decay;
    let failure = std::cell::Cell::new(None);
    let h_err = std::cell::Cell::new(0.0f64);
    let f = |u: f64| {
        let y = (-0.5 * k * u).exp();
        match h_integral(y, g, b, cfg) {
            Ok((h, e)) => {
                h_err.set(h_err.get().max(e));
                alpha * y * cis(-omega * u) * (h - r * (-b * (1.0 - y)).exp())
            }
            Err(e) => {
                failure.set(Some(e));
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let num = integrate(f, 0.0, u0, &cfg.with_hint(big))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let num = num.require_converged("left-right coefficient")?;

    let e = |lam: Complex64| cis(-omega * u0) / (i * omega + lam);
    let ay = Complex64::new(alpha * y0, 0.0);
    let (h0, h0_err) = h_integral(y0, g, b, cfg)?;
    let r3 = -r * ay * (-alpha * traj.ubar0()).exp() * e(ay)
        + cis(-omega_p * u0) / Complex64::new(omega_p, alpha * y0)
            * (-i * omega_p * omega_p * e(i * omega_p) - i * alpha * alpha * a * e(ay))
        + ay * h0 * e(ay);

    let pre = 1.0 / (2.0 * PI * (omega * omega_p).sqrt());
    let value = i * pre * (r1 + r2_analytic + num.value + r3);
    let est = pre * (num.abs_err + alpha * u0 * h_err.get() + alpha * y0 * e(ay).norm() * h0_err);
    Ok(BetaResult::new(value, Method::ExactQuadrature, est))
}
