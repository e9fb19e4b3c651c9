//! Inner integrals shared by the semitransparent coefficients and modes.
//!
//! `I(y) = int_0^{1-y} e^{i c (s^2 + 2 s y)} e^{-b s} ds` and
//! `H(y) = b int_0^{1-y} (s + y)^{2 i g} e^{-b s} ds`, with `y` in `(0, 1]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::cis;
use crate::error::Result;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::special::faddeeva_w;

/// `e^{-b s}` is below `e^{-DECAY_CUT}` past `s = DECAY_CUT / b`.
pub(crate) const DECAY_CUT: f64 = 50.0;

/// `I` together with `B = 1 - b I` and an absolute error estimate of `B`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Inner {
    pub i: Complex64,
    pub b_factor: Complex64,
    pub err: f64,
}

/// Closed form through the Faddeeva function; needs `c > 0`.
///
/// Both Faddeeva arguments lie in the upper half-plane, where the rational
/// approximation is uniformly accurate.
pub(crate) fn inner_closed(y: f64, c: f64, b: f64) -> Inner {
    let l = 1.0 - y;
    let i = Complex64::i();
    let q = c.sqrt() * cis(-0.25 * PI);
    let m = Complex64::new(y, 0.5 * b / c);
    let z0 = q * m;
    let z1 = q * (m + l);
    let edge = Complex64::new(-b * l, c * l * (l + 2.0 * y)).exp();
    let val = PI.sqrt() / (2.0 * q) * (faddeeva_w(i * z0) - edge * faddeeva_w(i * z1));
    let b_factor = 1.0 - b * val;
    Inner {
        i: val,
        b_factor,
        err: 1e-13 * (1.0 + b * val.norm()),
    }
}

/// `B = g(L) e^{-bL} - int_0^L g'(s) e^{-bs} ds` with `g = e^{i c (s^2 + 2 s y)}`.
///
/// Free of the cancellation in `1 - b I` when `b` is large.
pub(crate) fn inner_by_parts(y: f64, c: f64, b: f64, cfg: &QuadratureConfig) -> Result<Inner> {
    let l = 1.0 - y;
    let top = l.min(DECAY_CUT / b);
    let g = |s: f64| cis(c * s * (s + 2.0 * y));
    let dg = |s: f64| Complex64::new(0.0, 2.0 * c * (s + y)) * g(s) * (-b * s).exp();
    let icfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / b,
        oscillation_hint: Some(2.0 * c * (top + y)),
        ..*cfg
    };
    let r = integrate(dg, 0.0, top, &icfg)?.require_converged("inner integral")?;
    let b_factor = g(l) * (-b * l).exp() - r.value;
    let tail = if top < l { 2.0 * c * (-DECAY_CUT).exp() / b } else { 0.0 };
    Ok(Inner {
        i: (1.0 - b_factor) / b,
        b_factor,
        err: r.abs_err + tail,
    })
}

/// Direct quadrature of `I`, truncated where `e^{-bs}` is negligible.
pub(crate) fn inner_quadrature(y: f64, c: f64, b: f64, cfg: &QuadratureConfig) -> Result<Inner> {
    let l = 1.0 - y;
    let top = if b > 0.0 { l.min(DECAY_CUT / b) } else { l };
    let f = |s: f64| Complex64::new(-b * s, c * s * (s + 2.0 * y)).exp();
    let icfg = QuadratureConfig {
        oscillation_hint: Some(2.0 * c * (top + y)),
        ..*cfg
    };
    let r = integrate(f, 0.0, top, &icfg)?.require_converged("inner integral")?;
    let tail = if top < l { (-DECAY_CUT).exp() / b } else { 0.0 };
    Ok(Inner {
        i: r.value,
        b_factor: 1.0 - b * r.value,
        err: b * (r.abs_err + tail),
    })
}

/// Routes to the by-parts form when `b` dominates, else the closed form.
pub(crate) fn inner_auto(y: f64, c: f64, b: f64, cfg: &QuadratureConfig) -> Result<Inner> {
    if b > DECAY_CUT * (1.0 + c) {
        inner_by_parts(y, c, b, cfg)
    } else {
        Ok(inner_closed(y, c, b))
    }
}

const SERIES_MAX_B: f64 = 8.0;

/// `sum_n x^n / prod_{j=0}^n (c + j)`.
fn kummer_series(c: Complex64, x: f64) -> Complex64 {
    let mut term = c.inv();
    let mut sum = term;
    for n in 1..500 {
        term *= x / (c + n as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `H(y)` for phase rate `g` (the exponent is `2 i g`) and decay `b`.
///
/// Series in the lower incomplete gamma function for `b <= 8`, quadrature in
/// `t = ln(s + y)` otherwise.
pub(crate) fn h_integral(y: f64, g: f64, b: f64, cfg: &QuadratureConfig) -> Result<(Complex64, f64)> {
    if b == 0.0 || y >= 1.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    if b <= SERIES_MAX_B {
        let c = Complex64::new(1.0, 2.0 * g);
        let yc = (c * y.ln()).exp();
        let v = b * ((-b * (1.0 - y)).exp() * kummer_series(c, b) - yc * kummer_series(c, b * y));
        return Ok((v, 1e-14 * (1.0 + v.norm())));
    }
    h_quadrature(y, g, b, cfg)
}

/// `H(y)` by quadrature in `t = ln(s + y)`.
pub(crate) fn h_quadrature(y: f64, g: f64, b: f64, cfg: &QuadratureConfig) -> Result<(Complex64, f64)> {
    if b == 0.0 || y >= 1.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let l = 1.0 - y;
    let top_s = l.min(DECAY_CUT / b);
    let t0 = y.ln();
    let t1 = (y + top_s).ln();
    let f = |t: f64| {
        let e = t.exp();
        Complex64::new(t - b * (e - y), 2.0 * g * t).exp()
    };
    let icfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / b,
        oscillation_hint: Some(2.0 * g),
        ..*cfg
    };
    let r = integrate(f, t0, t1, &icfg)?.require_converged("H integral")?;
    let tail = if top_s < l { (-DECAY_CUT).exp() } else { 0.0 };
    Ok((b * r.value, b * r.abs_err + tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadratureConfig {
        QuadratureConfig::default().with_tolerances(1e-12, 1e-16)
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &(y, c, b) in &[
            (0.3, 50.0, 2.0),
            (1e-6, 100.0, 2.0),
            (0.9, 3.0, 0.02),
            (0.5, 1000.0, 20.0),
            (0.01, 1e-3, 1.0),
        ] {
            let a = inner_closed(y, c, b);
            let q = inner_quadrature(y, c, b, &tight()).unwrap();
            assert!(
                (a.i - q.i).norm() <= 1e-11 * q.i.norm().max(1e-3),
                "y={y} c={c} b={b}: {} vs {}",
                a.i,
                q.i
            );
        }
    }

    #[test]
    fn by_parts_matches_closed_form() {
        for &(y, c, b) in &[(0.3, 5.0, 400.0), (0.99, 20.0, 3000.0)] {
            let a = inner_closed(y, c, b);
            let p = inner_by_parts(y, c, b, &tight()).unwrap();
            assert!((a.b_factor - p.b_factor).norm() < 1e-9, "{} vs {}", a.b_factor, p.b_factor);
        }
    }

    #[test]
    fn h_reference_values() {
        let cfg = tight();
        let cases = [
            ((0.3, 50.0, 2.0), Complex64::new(0.005_040_705_114_720_571, -0.001_755_131_524_242_936)),
            ((0.01, 50.0, 2.0), Complex64::new(0.000_165_445_238_742_008_57, -0.002_813_827_233_574_023_5)),
            ((0.5, 3.0, 0.4), Complex64::new(-0.019_965_052_669_774_625, -0.075_660_270_007_702_88)),
        ];
        for ((y, g, b), want) in cases {
            let (s, _) = h_integral(y, g, b, &cfg).unwrap();
            let (q, _) = h_quadrature(y, g, b, &QuadratureConfig::default()).unwrap();
            assert!((s - want).norm() < 1e-12 * want.norm().max(1e-2), "{s} vs {want}");
            assert!((q - want).norm() < 1e-9 * want.norm().max(1e-2), "{q} vs {want}");
        }
    }

    #[test]
    fn h_vanishes_at_the_mirror_join() {
        let (v, _) = h_integral(1.0, 10.0, 2.0, &tight()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        let (v, _) = h_integral(0.4, 10.0, 0.0, &tight()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }
}
