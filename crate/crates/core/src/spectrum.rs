//! Particle number per mode, radiated energy, emission rate, and the
//! Bose-Einstein / Fermi-Dirac classifier.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bogoliubov::{beta_rr_semi_exact, beta_sq_rr_perfect};
use crate::error::{require_positive, DceError, Result};
use crate::quadrature::{integrate, integrate_semi_infinite, integrate_semi_infinite_with};
use crate::quadrature::{QuadratureConfig, QuadratureResult, TailModel};
use crate::scattering::ScatteringParams;
use crate::trajectory::MirrorTrajectory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub n_omega: f64,
    pub err: f64,
}

/// Tail exponent of `|beta|^2` in `omega'` for the semitransparent mirror.
const BETA_SQ_DECAY: f64 = 2.0;

/// `N_omega = int_0^inf |beta_RR(omega, omega')|^2 d omega'`, split at `omega' = k`.
///
/// `cfg` sets the tolerance of the `omega'` integral; each coefficient is
/// evaluated a hundred times tighter.
pub fn particle_number_numeric(
    omega: f64,
    traj: &MirrorTrajectory,
    p: &ScatteringParams,
    cfg: &QuadratureConfig,
) -> Result<SpectrumPoint> {
    require_positive("omega", omega)?;
    if p.is_perfect() {
        // |beta|^2 ~ 1/omega' for the perfect mirror
        return Err(DceError::DivergentTail(1.0));
    }
    if p.alpha() == 0.0 {
        return Ok(SpectrumPoint {
            omega,
            n_omega: 0.0,
            err: 0.0,
        });
    }
    let k = traj.k();
    let inner_cfg = QuadratureConfig {
        rel_tol: (cfg.rel_tol * 1e-2).max(1e-12),
        abs_tol: 1e-15,
        ..*cfg
    }
    .without_hint();
    let failure = std::cell::Cell::new(None);
    let beta_err = std::cell::Cell::new(0.0f64);
    let f = |wp: f64| match beta_rr_semi_exact(omega, wp, traj, p, &inner_cfg) {
        Ok(b) => {
            beta_err.set(beta_err.get().max(b.abs_sq_error() * wp));
            Complex64::new(b.abs_sq, 0.0)
        }
        Err(e) => {
            failure.set(Some(e));
            Complex64::new(0.0, 0.0)
        }
    };
    let outer = cfg.without_hint();
    let low = integrate(&f, 0.0, k, &outer)?;
    let high = integrate_semi_infinite(&f, k, BETA_SQ_DECAY, &outer)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let low = low.require_converged("particle number below k")?;
    let high = high.require_converged("particle number above k")?;
    Ok(SpectrumPoint {
        omega,
        n_omega: low.value.re + high.value.re,
        err: low.abs_err + high.abs_err + beta_err.get(),
    })
}

/// `N_omega = (2 pi omega)^{-1} (alpha/k)^2 (e^{2 pi omega/k} + 1)^{-1}`.
pub fn particle_number_closed(omega: f64, k: f64, alpha: f64) -> Result<SpectrumPoint> {
    require_positive("omega", omega)?;
    require_positive("k", k)?;
    check_alpha(alpha)?;
    let r = alpha / k;
    Ok(SpectrumPoint {
        omega,
        n_omega: r * r / (2.0 * PI * omega * ((2.0 * PI * omega / k).exp() + 1.0)),
        err: 0.0,
    })
}

/// Total radiated energy `alpha^2 ln 2 / (4 pi^2 k)`, in units of hbar.
pub fn radiated_energy(k: f64, alpha: f64) -> Result<f64> {
    require_positive("k", k)?;
    check_alpha(alpha)?;
    Ok(alpha * alpha * std::f64::consts::LN_2 / (4.0 * PI * PI * k))
}

/// `int_0^inf omega N_omega d omega` with the closed-form `N_omega`.
pub fn radiated_energy_numeric(k: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    require_positive("k", k)?;
    check_alpha(alpha)?;
    let f = |w: f64| {
        if w <= 0.0 {
            // omega N_omega -> (alpha/k)^2 / (4 pi)
            return Complex64::new((alpha / k).powi(2) / (4.0 * PI), 0.0);
        }
        let n = particle_number_closed(w, k, alpha).map(|p| p.n_omega).unwrap_or(0.0);
        Complex64::new(w * n, 0.0)
    };
    integrate_semi_infinite_with(f, 0.0, TailModel::Exponential(2.0 * PI / k), &cfg.without_hint())
}

/// `int_0^inf (e^{2 pi omega/k} + 1)^{-1} d omega`, analytically `(k / 2 pi) ln 2`.
pub fn fermi_occupation_integral(k: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    require_positive("k", k)?;
    let f = |w: f64| Complex64::new(1.0 / ((2.0 * PI * w / k).exp() + 1.0), 0.0);
    integrate_semi_infinite_with(f, 0.0, TailModel::Exponential(2.0 * PI / k), &cfg.without_hint())
}

/// Perfect-mirror pair creation per unit time, `(2 pi)^{-1} (e^{2 pi omega/k} - 1)^{-1}`.
pub fn emission_rate_perfect(omega: f64, k: f64) -> Result<f64> {
    require_positive("omega", omega)?;
    require_positive("k", k)?;
    Ok(1.0 / (2.0 * PI * (2.0 * PI * omega / k).exp_m1()))
}

/// Least-squares line `intercept + slope * ln(Lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub intercept: f64,
    pub slope: f64,
    /// Largest absolute deviation of the data from the line.
    pub max_deviation: f64,
}

/// Fits `int_k^Lambda |beta_perfect|^2 d omega'` against `ln Lambda`.
///
/// The integral grows without bound, which is the mode-occupancy divergence
/// of the eternally reflecting mirror.
pub fn perfect_occupancy_log_fit(
    omega: f64,
    k: f64,
    lambdas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<LogFit> {
    require_positive("omega", omega)?;
    require_positive("k", k)?;
    if lambdas.len() < 2 {
        return Err(DceError::InvalidInput("need at least two cutoffs".into()));
    }
    let mut xs = Vec::with_capacity(lambdas.len());
    let mut ys = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        if !(lam > k) || !lam.is_finite() {
            return Err(DceError::InvalidInput(format!("cutoff {lam} must exceed k")));
        }
        // omega' = e^t
        let f = |t: f64| {
            let wp = t.exp();
            Complex64::new(wp * beta_sq_rr_perfect(omega, wp, k).unwrap_or(0.0), 0.0)
        };
        let r = integrate(f, k.ln(), lam.ln(), &cfg.without_hint())?
            .require_converged("occupancy integral")?;
        xs.push(lam.ln());
        ys.push(r.value.re);
    }
    let (intercept, slope) = linear_fit(&xs, &ys)?;
    let max_deviation = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(LogFit {
        intercept,
        slope,
        max_deviation,
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(DceError::FitFailure("abscissae are not distinct".into()));
    }
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(DceError::ParameterDomain {
            name: "alpha",
            value: alpha,
            reason: "must be finite and >= 0",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    BoseEinstein,
    FermiDirac,
}

impl Statistics {
    /// `s` in `(e^{x} + s)^{-1}`.
    pub fn sign(&self) -> f64 {
        match self {
            Statistics::BoseEinstein => -1.0,
            Statistics::FermiDirac => 1.0,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Statistics::BoseEinstein => "bose_einstein",
            Statistics::FermiDirac => "fermi_dirac",
        }
    }
}

/// Model `n(omega) = C omega^p (e^{2 pi omega / k} + s)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitHints {
    /// Power `p` of the prefactor; -1 for the particle number per mode.
    pub omega_power: f64,
    /// Starting temperature scale; taken from the data when absent.
    pub k_init: Option<f64>,
}

impl Default for FitHints {
    fn default() -> Self {
        Self {
            omega_power: -1.0,
            k_init: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub statistics: Statistics,
    pub amplitude: f64,
    pub k_fit: f64,
    /// RMS of the log residuals of the chosen branch.
    pub residual: f64,
    pub rejected_residual: f64,
    /// `rejected_residual / residual`.
    pub ratio: f64,
    pub low_confidence: bool,
}

const LOW_CONFIDENCE_RATIO: f64 = 1.2;
const SCAN_DECADES: f64 = 3.0;
const SCAN_POINTS: usize = 241;

struct Branch {
    amplitude: f64,
    k: f64,
    rms: f64,
}

/// `ln(e^x + s)` without overflow.
fn ln_occupation(x: f64, s: f64) -> f64 {
    if s > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x + (-(-x).exp_m1()).ln()
    }
}

/// Residuals with the amplitude profiled out; returns (ln C, rms).
fn profile(ln_k: f64, lw: &[f64], w: &[f64], ln_n: &[f64], p: f64, s: f64) -> (f64, f64) {
    let k = ln_k.exp();
    let base: Vec<f64> = w
        .iter()
        .zip(lw)
        .zip(ln_n)
        .map(|((wi, lwi), lni)| lni - p * lwi + ln_occupation(2.0 * PI * wi / k, s))
        .collect();
    let ln_c = base.iter().sum::<f64>() / base.len() as f64;
    let ss: f64 = base.iter().map(|b| (b - ln_c) * (b - ln_c)).sum();
    (ln_c, (ss / base.len() as f64).sqrt())
}

fn fit_branch(w: &[f64], ln_n: &[f64], p: f64, s: f64, k0: f64) -> Result<Branch> {
    let lw: Vec<f64> = w.iter().map(|x| x.ln()).collect();
    let cost = |lk: f64| profile(lk, &lw, w, ln_n, p, s).1;
    let lo = k0.ln() - SCAN_DECADES * std::f64::consts::LN_10;
    let hi = k0.ln() + SCAN_DECADES * std::f64::consts::LN_10;
    let h = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let mut best = 0;
    let mut best_cost = f64::INFINITY;
    for i in 0..SCAN_POINTS {
        let c = cost(lo + h * i as f64);
        if c < best_cost {
            best_cost = c;
            best = i;
        }
    }
    if !best_cost.is_finite() {
        return Err(DceError::FitFailure("residuals are not finite".into()));
    }
    if best == 0 || best == SCAN_POINTS - 1 {
        return Err(DceError::FitFailure(
            "no interior minimum in the temperature scale".into(),
        ));
    }
    // golden-section refinement within the bracketing grid cells
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = lo + h * (best - 1) as f64;
    let mut b = lo + h * (best + 1) as f64;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = cost(x2);
        }
    }
    let lk = 0.5 * (a + b);
    let (ln_c, rms) = profile(lk, &lw, w, ln_n, p, s);
    Ok(Branch {
        amplitude: ln_c.exp(),
        k: lk.exp(),
        rms,
    })
}

/// Fits the spectrum with Bose-Einstein and Fermi-Dirac occupations and keeps
/// the better branch.
///
/// The fit is in log space, so the residual is relative. The amplitude is
/// profiled out, leaving a one-dimensional search in `ln k`.
pub fn classify_statistics(points: &[SpectrumPoint], hints: &FitHints) -> Result<FitResult> {
    if points.len() < 5 {
        return Err(DceError::InvalidInput(format!(
            "need at least 5 points, got {}",
            points.len()
        )));
    }
    let mut pts: Vec<SpectrumPoint> = points.to_vec();
    pts.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    for p in &pts {
        if !(p.omega > 0.0 && p.omega.is_finite() && p.n_omega > 0.0 && p.n_omega.is_finite()) {
            return Err(DceError::InvalidInput(format!(
                "point (omega={}, n={}) must have positive finite values",
                p.omega, p.n_omega
            )));
        }
    }
    let w: Vec<f64> = pts.iter().map(|p| p.omega).collect();
    let ln_n: Vec<f64> = pts.iter().map(|p| p.n_omega.ln()).collect();
    let (wmin, wmax) = (w[0], w[w.len() - 1]);
    if wmax < 4.0 * wmin {
        return Err(DceError::InvalidInput(
            "frequencies must span at least a factor of 4".into(),
        ));
    }
    let spread = ln_n.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - ln_n.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread < 1e-12 {
        return Err(DceError::FitFailure("flat data carry no temperature".into()));
    }
    let p = hints.omega_power;
    let k0 = match hints.k_init {
        Some(k) => require_positive("k_init", k)?,
        None => {
            let n = w.len();
            let dw = w[n - 1] - w[n - 2];
            let slope = (ln_n[n - 1] - ln_n[n - 2]) / dw - p * (w[n - 1] / w[n - 2]).ln() / dw;
            let k = -2.0 * PI / slope;
            if k.is_finite() && k > 0.0 {
                k
            } else {
                wmax
            }
        }
    };
    let be = fit_branch(&w, &ln_n, p, -1.0, k0);
    let fd = fit_branch(&w, &ln_n, p, 1.0, k0);
    let (chosen, stats, rejected) = match (be, fd) {
        (Ok(b), Ok(f)) => {
            if b.rms <= f.rms {
                (b, Statistics::BoseEinstein, f.rms)
            } else {
                (f, Statistics::FermiDirac, b.rms)
            }
        }
        (Ok(b), Err(_)) => (b, Statistics::BoseEinstein, f64::INFINITY),
        (Err(_), Ok(f)) => (f, Statistics::FermiDirac, f64::INFINITY),
        (Err(e), Err(_)) => return Err(e),
    };
    let ratio = if chosen.rms > 0.0 {
        rejected / chosen.rms
    } else {
        f64::INFINITY
    };
    Ok(FitResult {
        statistics: stats,
        amplitude: chosen.amplitude,
        k_fit: chosen.k,
        residual: chosen.rms,
        rejected_residual: rejected,
        ratio,
        low_confidence: ratio < LOW_CONFIDENCE_RATIO,
    })
}
