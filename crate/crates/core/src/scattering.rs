//! Static-mirror scattering data for the delta-coupled semitransparent mirror.

use num_complex::Complex64;

use crate::error::{require_finite, DceError, Result};

/// Mirror transparency parameter `alpha` and rest position `l`.
///
/// `alpha = +inf` is accepted and denotes the perfectly reflecting mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringParams {
    alpha: f64,
    l: f64,
}

impl ScatteringParams {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_position(alpha, 0.0)
    }

    pub fn with_position(alpha: f64, l: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(DceError::ParameterDomain {
                name: "alpha",
                value: alpha,
                reason: "must be >= 0",
            });
        }
        let l = require_finite("L", l)?;
        Ok(Self { alpha, l })
    }

    pub fn perfect() -> Self {
        Self {
            alpha: f64::INFINITY,
            l: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn position(&self) -> f64 {
        self.l
    }

    pub fn is_perfect(&self) -> bool {
        self.alpha.is_infinite()
    }
}

fn check(omega: f64, p: &ScatteringParams) -> Result<()> {
    require_finite("omega", omega)?;
    if omega == 0.0 && p.alpha == 0.0 {
        return Err(DceError::SingularCoefficient);
    }
    Ok(())
}

/// `r(omega) = -i alpha / (omega + i alpha)`.
pub fn reflection(omega: f64, p: &ScatteringParams) -> Result<Complex64> {
    check(omega, p)?;
    if p.alpha.is_infinite() {
        return Ok(Complex64::new(-1.0, 0.0));
    }
    Ok(Complex64::new(0.0, -p.alpha) / Complex64::new(omega, p.alpha))
}

/// `s(omega) = omega / (omega + i alpha)`.
pub fn transmission(omega: f64, p: &ScatteringParams) -> Result<Complex64> {
    check(omega, p)?;
    if p.alpha.is_infinite() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(Complex64::new(omega, 0.0) / Complex64::new(omega, p.alpha))
}

/// 2x2 scattering matrix, row-major.
pub type SMatrix = [[Complex64; 2]; 2];

/// `S = [[s, r e^{-2i omega L}], [r e^{2i omega L}, s]]`.
pub fn s_matrix(omega: f64, p: &ScatteringParams) -> Result<SMatrix> {
    let r = reflection(omega, p)?;
    let s = transmission(omega, p)?;
    let phase = Complex64::from_polar(1.0, 2.0 * omega * p.l);
    Ok([[s, r * phase.conj()], [r * phase, s]])
}

/// `max |(S^dagger S - 1)_{ij}|`.
pub fn unitarity_defect(omega: f64, p: &ScatteringParams) -> Result<f64> {
    let m = s_matrix(omega, p)?;
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in &m {
                acc += row[i].conj() * row[j];
            }
            if i == j {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    Ok(worst)
}
