//! Reflected and transmitted right-moving modes on right future null infinity.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::cis;
use super::inner::{h_quadrature, DECAY_CUT};
use crate::error::{require_finite, require_positive, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::scattering::{reflection, transmission, ScatteringParams};
use crate::trajectory::MirrorTrajectory;

/// `int_0^L e^{i (omega/k)(s + 1 - L)^2} e^{-2 alpha s / k} ds` with `L = k ubar / 2`.
fn reflected_inner(
    ubar: f64,
    omega: f64,
    alpha: f64,
    traj: &MirrorTrajectory,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64)> {
    let k = traj.k();
    let l = 0.5 * k * ubar;
    let b = 2.0 * alpha / k;
    let top = l.min(DECAY_CUT / b);
    let y = 1.0 - l;
    let f = |s: f64| Complex64::new(-b * s, omega / k * (s + y) * (s + y)).exp();
    let icfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / b.max(1.0),
        ..cfg.with_hint(2.0 * omega / k * (1.0 + l))
    };
    let r = integrate(f, 0.0, top, &icfg)?.require_converged("reflected mode integral")?;
    let tail = if top < l { (-DECAY_CUT).exp() / b } else { 0.0 };
    Ok((r.value, r.abs_err + tail))
}

/// `int_0^L (s + 1 - L)^{2 i omega/k} e^{-2 alpha s / k} ds` with `L = k ubar / 2`.
fn transmitted_inner(
    ubar: f64,
    omega: f64,
    alpha: f64,
    traj: &MirrorTrajectory,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64)> {
    let k = traj.k();
    let b = 2.0 * alpha / k;
    let y = 1.0 - 0.5 * k * ubar;
    let (h, err) = h_quadrature(y, omega / k, b, cfg)?;
    Ok((h / b, err / b))
}

fn check(u: f64, omega: f64) -> Result<()> {
    require_finite("u", u)?;
    require_positive("omega", omega)?;
    Ok(())
}

/// Reflected mode `phi^refl_{omega,R}(u)`.
pub fn phi_refl(
    u: f64,
    omega: f64,
    traj: &MirrorTrajectory,
    p: &ScatteringParams,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    check(u, omega)?;
    let n = 1.0 / (4.0 * PI * omega).sqrt();
    if p.is_perfect() {
        return Ok(-n * cis(-omega * traj.eval_v(u)));
    }
    let alpha = p.alpha();
    if alpha == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = traj.k();
    let r = reflection(omega, p)?;
    let ubar = traj.eval_ubar(u);
    if u <= 0.0 {
        return Ok(n * r * cis(-omega * u));
    }
    let lead = n * r * (-alpha * ubar).exp();
    let shift = -(2.0 * alpha / k) * n * cis(-omega / k);
    if u <= traj.u0() {
        let (kv, _) = reflected_inner(ubar, omega, alpha, traj, cfg)?;
        return Ok(lead + shift * kv);
    }
    let ubar0 = traj.ubar0();
    let d = (-alpha * (ubar - ubar0)).exp();
    let ia = Complex64::new(0.0, alpha);
    let (k0, _) = reflected_inner(ubar0, omega, alpha, traj, cfg)?;
    let coast = ia / (traj.sqrt_a() * omega + ia)
        * (cis(-omega * traj.eval_v(u)) - cis(-omega * traj.v0()) * d);
    Ok(lead - n * coast + shift * d * k0)
}

/// Transmitted mode `phi^trans_{omega,L}(u)`.
pub fn phi_trans(
    u: f64,
    omega: f64,
    traj: &MirrorTrajectory,
    p: &ScatteringParams,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    check(u, omega)?;
    if p.is_perfect() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = 1.0 / (4.0 * PI * omega).sqrt();
    let alpha = p.alpha();
    let free = n * cis(-omega * u);
    if alpha == 0.0 {
        return Ok(free);
    }
    let k = traj.k();
    let r = reflection(omega, p)?;
    if u <= 0.0 {
        return Ok(transmission(omega, p)? * free);
    }
    let ubar = traj.eval_ubar(u);
    let lead = n * r * (-alpha * ubar).exp();
    let scale = 2.0 * alpha / k * n;
    if u <= traj.u0() {
        let (g, _) = transmitted_inner(ubar, omega, alpha, traj, cfg)?;
        return Ok(free + lead - scale * g);
    }
    let ubar0 = traj.ubar0();
    let y0 = traj.sqrt_a();
    let d = (-alpha * (ubar - ubar0)).exp();
    let (g0, _) = transmitted_inner(ubar0, omega, alpha, traj, cfg)?;
    let coast = n * cis(-omega * traj.u0()) / Complex64::new(omega, alpha * y0)
        * (omega * cis(-omega * (u - traj.u0())) + Complex64::new(0.0, alpha * y0 * d));
    Ok(lead + coast - scale * d * g0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup() -> (MirrorTrajectory, ScatteringParams, QuadratureConfig) {
        (
            MirrorTrajectory::new(1.0, 30.0).unwrap(),
            ScatteringParams::new(1.0).unwrap(),
            QuadratureConfig::default(),
        )
    }

    #[test]
    fn inertial_branch_by_hand() {
        let (t, p, cfg) = setup();
        let n = 1.0 / (4.0 * PI).sqrt();
        let e = cis(1.0);
        let want = n * c(0.0, -1.0) / c(1.0, 1.0) * e;
        assert!((phi_refl(-1.0, 1.0, &t, &p, &cfg).unwrap() - want).norm() < 1e-15);
        let want = n / c(1.0, 1.0) * e;
        assert!((phi_trans(-1.0, 1.0, &t, &p, &cfg).unwrap() - want).norm() < 1e-15);
    }

    #[test]
    fn reference_values() {
        let (t, p, cfg) = setup();
        let refl = [
            (0.7, c(-0.197_436_768_963_149_12, -0.042_413_328_258_363_97)),
            (3.0, c(-0.195_911_842_539_694_56, 0.108_037_545_415_643_4)),
            (35.0, c(-0.181_505_136_659_701_7, 0.153_767_922_524_281_93)),
        ];
        let trans = [
            (0.7, c(0.022_406_037_126_891_258, -0.215_978_184_331_004_86)),
            (3.0, c(-0.320_257_632_028_291_8, 0.082_963_906_123_889_27)),
            (35.0, c(-0.262_237_691_667_490_1, 0.163_611_481_810_760_6)),
        ];
        for (u, want) in refl {
            let got = phi_refl(u, 1.0, &t, &p, &cfg).unwrap();
            assert!((got - want).norm() < 1e-10, "u={u}: {got} vs {want}");
        }
        for (u, want) in trans {
            let got = phi_trans(u, 1.0, &t, &p, &cfg).unwrap();
            assert!((got - want).norm() < 1e-10, "u={u}: {got} vs {want}");
        }
        let p3 = ScatteringParams::new(0.3).unwrap();
        let got = phi_refl(2.0, 2.0, &t, &p3, &cfg).unwrap();
        assert!((got - c(-0.030_071_587_580_309_066, 0.028_489_141_118_274_71)).norm() < 1e-10);
        let got = phi_trans(2.0, 2.0, &t, &p3, &cfg).unwrap();
        assert!((got - c(-0.129_172_216_430_204_33, 0.160_471_056_116_310_77)).norm() < 1e-10);
    }

    #[test]
    fn transparent_limit() {
        let (t, _, cfg) = setup();
        let p0 = ScatteringParams::new(0.0).unwrap();
        for u in [-3.0, 0.5, 10.0, 40.0] {
            assert_eq!(phi_refl(u, 1.3, &t, &p0, &cfg).unwrap(), c(0.0, 0.0));
            let want = cis(-1.3 * u) / (4.0 * PI * 1.3).sqrt();
            assert!((phi_trans(u, 1.3, &t, &p0, &cfg).unwrap() - want).norm() < 1e-15);
        }
    }

    #[test]
    fn strong_coupling_limit() {
        let (_, _, cfg) = setup();
        // the coasting mirror must still see omega / sqrt(A) << alpha
        let t = MirrorTrajectory::new(1.0, 5.0).unwrap();
        let alpha = 1e6;
        let p = ScatteringParams::new(alpha).unwrap();
        let w = 1.5;
        let n = 1.0 / (4.0 * PI * w).sqrt();
        for u in [-2.0, 0.3, 4.0, 6.0] {
            let perfect = -n * cis(-w * t.eval_v(u));
            let r = phi_refl(u, w, &t, &p, &cfg).unwrap();
            let bound = 10.0 * w / (alpha * t.sqrt_a());
            assert!((r - perfect).norm() < bound, "u={u}: {r} vs {perfect}");
            let s = phi_trans(u, w, &t, &p, &cfg).unwrap();
            assert!(s.norm() < bound, "u={u}: {s}");
        }
    }
}
