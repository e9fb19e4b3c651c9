//! Complex log-gamma, the two `|Gamma|^2` line identities, real-base complex
//! powers and the Faddeeva function.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{DceError, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

// B_{2n} / (2n (2n - 1)), n = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const SHIFT_TO: f64 = 20.0;

/// Principal branch of `ln Gamma(z)`.
///
/// Stirling series after an upward shift to `Re z >= 20`. The result is the
/// principal branch for `Re z > 0`; for `Re z <= 0` its exponential is still
/// `Gamma(z)` but the imaginary part may differ by a multiple of `2 pi`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(DceError::InvalidInput(format!("log_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(DceError::Pole(z.re));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TO {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift)
}

/// `|Gamma(1 + i y)|^2 = pi y / sinh(pi y)`.
pub fn gamma_abs_sq_one_plus(y: f64) -> f64 {
    let x = PI * y.abs();
    if x == 0.0 {
        1.0
    } else if x < 20.0 {
        x / x.sinh()
    } else {
        let e = (-x).exp();
        2.0 * x * e / (1.0 - e * e)
    }
}

/// `|Gamma(1/2 + i y)|^2 = pi / cosh(pi y)`.
pub fn gamma_abs_sq_half_plus(y: f64) -> f64 {
    let x = PI * y.abs();
    if x < 20.0 {
        PI / x.cosh()
    } else {
        let e = (-x).exp();
        2.0 * PI * e / (1.0 + e * e)
    }
}

/// `x^{i gamma} = exp(i gamma ln x)` for real `x > 0`.
pub fn cpow_imag(x: f64, gamma: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(DceError::Branch(x));
    }
    Ok(Complex64::from_polar(1.0, gamma * x.ln()))
}

const WEIDEMAN_N: usize = 40;

struct Weideman {
    coeffs: [f64; WEIDEMAN_N],
    l: f64,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = (n as f64 / 2f64.sqrt()).sqrt();
        let mut f = vec![0.0; m2];
        for (idx, slot) in f.iter_mut().enumerate().skip(1) {
            let k = idx as f64 - m as f64;
            let t = l * (0.5 * k * PI / m as f64).tan();
            *slot = (-t * t).exp() * (l * l + t * t);
        }
        // fftshift, then the real part of the DFT
        let g: Vec<f64> = (0..m2).map(|i| f[(i + m) % m2]).collect();
        let mut coeffs = [0.0; WEIDEMAN_N];
        for j in 1..=n {
            let mut acc = 0.0;
            for (i, gi) in g.iter().enumerate() {
                let ph = 2.0 * PI * ((j * i) % m2) as f64 / m2 as f64;
                acc += gi * ph.cos();
            }
            coeffs[n - j] = acc / m2 as f64;
        }
        Weideman { coeffs, l }
    })
}

/// Faddeeva function `w(z) = e^{-z^2} erfc(-i z)`.
///
/// Rational approximation with 40 terms, relative accuracy about 1e-14 in the
/// closed upper half-plane. The lower half-plane uses `w(z) = 2 e^{-z^2} - w(-z)`,
/// which overflows once `|Im z|^2 - |Re z|^2` exceeds about 700.
pub fn faddeeva_w(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return 2.0 * (-z * z).exp() - faddeeva_w(-z);
    }
    let tab = weideman();
    let i = Complex64::i();
    let lmz = tab.l - i * z;
    let big = (tab.l + i * z) / lmz;
    let mut p = Complex64::new(0.0, 0.0);
    for &c in &tab.coeffs {
        p = p * big + c;
    }
    let inv = lmz.inv();
    2.0 * p * inv * inv + inv / PI.sqrt()
}

/// Complementary error function for real argument, via `erfc(x) = e^{-x^2} w(i x)`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x > 27.0 {
        return 0.0;
    }
    (-x * x).exp() * faddeeva_w(Complex64::new(0.0, x)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn log_gamma_special_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn log_gamma_reference_values() {
        let cases = [
            (c(1.0, 1.0), c(-0.650_923_199_301_856_3, -0.301_640_320_467_533_2)),
            (c(0.5, 10.0), c(-14.789_024_734_744_293, 13.030_020_034_911_09)),
            (c(2.0, -100.0), c(-149.252_888_869_802_7, -362.862_380_086_203_6)),
            (c(0.7, 3.3), c(-4.026_557_774_708_237, 0.960_694_723_752_261_1)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert!(rel(got, want) < 1e-13, "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_poles() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(DceError::Pole(0.0)));
        assert_eq!(log_gamma(c(-3.0, 0.0)), Err(DceError::Pole(-3.0)));
        assert!(log_gamma(c(-3.0, 1e-3)).is_ok());
    }

    #[test]
    fn line_identities() {
        for y in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
            let g1 = log_gamma(c(1.0, y)).unwrap();
            let x = PI * y;
            let lhs = (2.0 * g1.re).exp() * x.sinh() / x;
            assert!((lhs - 1.0).abs() < 1e-12, "y={y}: {lhs}");
            let gh = log_gamma(c(0.5, y)).unwrap();
            let lhs = (2.0 * gh.re).exp() * x.cosh() / PI;
            assert!((lhs - 1.0).abs() < 1e-12, "y={y}: {lhs}");
        }
    }

    #[test]
    fn gamma_abs_sq_values() {
        assert_eq!(gamma_abs_sq_one_plus(0.0), 1.0);
        assert!((gamma_abs_sq_one_plus(1.0) - 0.272_029_054_982_133_16).abs() < 1e-15);
        let v = gamma_abs_sq_one_plus(10.0);
        assert!((v / 1.426_974_886_361_380_9e-12 - 1.0).abs() < 1e-13);
        assert!(gamma_abs_sq_one_plus(200.0) > 0.0);
        assert_eq!(gamma_abs_sq_one_plus(-2.5), gamma_abs_sq_one_plus(2.5));

        assert_eq!(gamma_abs_sq_half_plus(0.0), PI);
        assert!((gamma_abs_sq_half_plus(1.0) - 0.271_014_951_399_418_35).abs() < 1e-15);
        assert_eq!(gamma_abs_sq_half_plus(-1.0), gamma_abs_sq_half_plus(1.0));
        assert!(gamma_abs_sq_half_plus(200.0) > 0.0);
    }

    #[test]
    fn cpow_imag_values() {
        assert_eq!(cpow_imag(1.0, 7.3).unwrap(), c(1.0, 0.0));
        assert!((cpow_imag(std::f64::consts::E, PI).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        let a = 2.0 * 2f64.ln();
        assert!((cpow_imag(0.5, 2.0).unwrap() - c(a.cos(), -a.sin())).norm() < 1e-15);
        assert_eq!(cpow_imag(0.0, 1.0), Err(DceError::Branch(0.0)));
        assert_eq!(cpow_imag(-2.0, 1.0), Err(DceError::Branch(-2.0)));
    }

    #[test]
    fn faddeeva_values() {
        // w(0) = 1, w(i y) = e^{y^2} erfc(y)
        assert!((faddeeva_w(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-14);
        let w1 = faddeeva_w(c(0.0, 1.0));
        assert!((w1.re - 0.427_583_576_155_807).abs() < 1e-14);
        assert!(w1.im.abs() < 1e-14);
        let want = c(0.304_744_205_256_912_5, 0.208_218_938_202_831_6);
        assert!(rel(faddeeva_w(c(1.0, 1.0)), want) < 1e-13);
        // large argument: w(z) ~ i / (sqrt(pi) z)
        let z = c(150.0, 40.0);
        let asym = Complex64::i() / (PI.sqrt() * z) * (1.0 + 0.5 / (z * z));
        assert!(rel(faddeeva_w(z), asym) < 1e-8);
        // lower half-plane reflection
        let z = c(0.8, -0.6);
        let back = 2.0 * (-z * z).exp() - faddeeva_w(-z);
        assert!(rel(faddeeva_w(z), back) < 1e-15);
    }

    #[test]
    fn erfc_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert!((erfc(1.0) - 0.157_299_207_050_285_13).abs() < 1e-15);
        assert!((erfc(-1.0) - 1.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erfc(5.0) / 1.537_459_794_428_034_8e-12 - 1.0).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn log_gamma_recurrence(re in 0.5f64..2.0, im in -100.0f64..100.0) {
            let z = c(re, im);
            let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
            prop_assert!(d.norm() < 1e-12);
        }

        #[test]
        fn cpow_imag_unit_modulus(lx in -300.0f64..300.0, g in -1e3f64..1e3) {
            let v = cpow_imag(10f64.powf(lx), g).unwrap();
            prop_assert!((v.norm() - 1.0).abs() <= 1e-15);
        }

        #[test]
        fn faddeeva_symmetry(re in -50.0f64..50.0, im in 0.0f64..50.0) {
            // w(-conj z) = conj w(z)
            let z = c(re, im);
            let a = faddeeva_w(-z.conj());
            let b = faddeeva_w(z).conj();
            prop_assert!((a - b).norm() <= 1e-14 * b.norm());
        }
    }
}
