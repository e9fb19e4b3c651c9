//! Perfectly reflecting mirror.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_frequencies, cis, BetaResult, Method};
use crate::error::{require_positive, Result};
use crate::quadrature::{integrate_breaks, phase_breakpoints, QuadratureConfig};
use crate::special::log_gamma;
use crate::trajectory::MirrorTrajectory;

/// `int_A^1 x^{i omega/k} e^{i x omega'/k} dx`, integrated in `t = -ln x`.
pub(crate) fn power_phase_integral(
    omega: f64,
    omega_p: f64,
    traj: &MirrorTrajectory,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64)> {
    let k = traj.k();
    let t_max = k * traj.u0();
    let f = |t: f64| Complex64::new(-t, omega_p * (-t).exp() / k - omega * t / k).exp();
    let phase = |t: f64| (omega * t - omega_p * (-t).exp()) / k;
    let breaks = phase_breakpoints(0.0, t_max, phase, cfg.max_subdivisions / 4);
    let r = integrate_breaks(f, &breaks, &cfg.without_hint())?
        .require_converged("perfect-mirror integral")?;
    Ok((r.value, r.abs_err))
}

/// Exact right-right coefficient of the perfect mirror.
///
/// Sum of the static-part term, the boundary term at `u0` and the quadrature
/// over the accelerated segment; the inertial tails are assigned their
/// `omega -> omega - i0` limits.
pub fn beta_rr_perfect_exact(
    omega: f64,
    omega_p: f64,
    traj: &MirrorTrajectory,
    cfg: &QuadratureConfig,
) -> Result<BetaResult> {
    check_frequencies(omega, omega_p)?;
    let k = traj.k();
    let a = traj.a();
    let sq = (omega * omega_p).sqrt();
    let norm = 1.0 / (2.0 * PI * sq);

    // 1/i = -i
    let t1 = Complex64::new(0.0, -norm * omega_p / (omega + omega_p));
    let t2 = Complex64::new(0.0, norm) * cis(-(omega * traj.u0() + omega_p * traj.v0()))
        * (omega_p * a / (omega + omega_p * a));
    let (j, j_err) = power_phase_integral(omega, omega_p, traj, cfg)?;
    let pre3 = (omega_p / omega).sqrt() / (2.0 * PI * k);
    let t3 = -pre3 * cis(-omega_p / k) * j;

    Ok(BetaResult::new(t1 + t2 + t3, Method::ExactQuadrature, pre3 * j_err))
}

/// Late-time closed form of the perfect-mirror coefficient.
///
/// `(i k / omega')^{i omega/k}` is expanded on the principal branch, giving
/// modulus `e^{-pi omega/(2k)}`.
pub fn beta_rr_perfect_asymptotic(omega: f64, omega_p: f64, k: f64) -> Result<BetaResult> {
    check_frequencies(omega, omega_p)?;
    require_positive("k", k)?;
    let y = omega / k;
    let lg = log_gamma(Complex64::new(1.0, y))?;
    let expo = Complex64::new(-0.5 * PI * y, y * (k / omega_p).ln() - omega_p / k) + lg;
    let pre = Complex64::new(0.0, -1.0 / (2.0 * PI * (omega * omega_p).sqrt()));
    Ok(BetaResult::new(pre * expo.exp(), Method::AsymptoticClosedForm, 0.0))
}

/// `|beta|^2 = (2 pi omega' k)^{-1} (e^{2 pi omega/k} - 1)^{-1}`.
pub fn beta_sq_rr_perfect(omega: f64, omega_p: f64, k: f64) -> Result<f64> {
    check_frequencies(omega, omega_p)?;
    require_positive("k", k)?;
    Ok(1.0 / (2.0 * PI * omega_p * k * (2.0 * PI * omega / k).exp_m1()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(u0: f64) -> MirrorTrajectory {
        MirrorTrajectory::new(1.0, u0).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_reference_values() {
        let cfg = QuadratureConfig::default();
        let cases = [
            (0.5, 100.0, 30.0, c(-0.007_654_242_258_423_887, 0.003_648_718_795_014_162)),
            (1.0, 50.0, 30.0, c(0.001_753_307_565_505_926_3, 0.001_688_969_273_586_976_8)),
            (2.0, 50.0, 30.0, c(-1.072_808_561_950_277_5e-4, -4.303_934_191_280_248e-5)),
            (1.0, 100.0, 30.0, c(0.001_627_251_031_535_205_7, 5.698_680_281_316_305e-4)),
            (0.7, 300.0, 5.0, c(6.554_456_178_055_243e-4, -1.879_624_675_437_129_5e-4)),
            (1.0, 100.0, 3.0, c(-2.305_148_680_204_088_7e-4, 2.693_762_508_791_267_4e-4)),
        ];
        for (w, wp, u0, want) in cases {
            let b = beta_rr_perfect_exact(w, wp, &traj(u0), &cfg).unwrap();
            let err = (b.value - want).norm();
            assert!(err < 1e-10, "({w},{wp},{u0}): {} vs {want}", b.value);
            assert!(b.est_error < 1e-9);
        }
    }

    #[test]
    fn exact_matches_late_time_law() {
        let cfg = QuadratureConfig::default();
        let b = beta_rr_perfect_exact(0.5, 100.0, &traj(30.0), &cfg).unwrap();
        let want = beta_sq_rr_perfect(0.5, 100.0, 1.0).unwrap();
        assert!((b.abs_sq / want - 1.0).abs() < 0.05);
    }

    #[test]
    fn static_limit_vanishes() {
        let cfg = QuadratureConfig::default();
        let b = beta_rr_perfect_exact(1.0, 50.0, &traj(1e-12), &cfg).unwrap();
        assert!(b.value.norm() < 1e-11, "{}", b.value);
    }

    #[test]
    fn asymptotic_modulus_is_the_planck_law() {
        let b = beta_rr_perfect_asymptotic(1.0, 100.0, 1.0).unwrap();
        let want = 2.977_688_078_883_790_4e-6;
        assert!((b.abs_sq / want - 1.0).abs() < 1e-12);
        assert!((beta_sq_rr_perfect(1.0, 100.0, 1.0).unwrap() / want - 1.0).abs() < 1e-14);
        for (w, wp, k) in [(0.3, 40.0, 0.7), (2.0, 1e3, 1.0), (5.0, 10.0, 2.0)] {
            let b = beta_rr_perfect_asymptotic(w, wp, k).unwrap();
            let x = 2.0 * PI * w / k;
            assert!((b.abs_sq * 2.0 * PI * wp * k * x.exp_m1() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn planck_law_scalings() {
        let a = beta_sq_rr_perfect(1.0, 100.0, 1.0).unwrap();
        let b = beta_sq_rr_perfect(1.0, 200.0, 1.0).unwrap();
        assert!((a / b - 2.0).abs() < 1e-14);
        let mut last = f64::INFINITY;
        for w in [0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let v = beta_sq_rr_perfect(w, 100.0, 1.0).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(beta_sq_rr_perfect(0.0, 1.0, 1.0).is_err());
    }
}
