//! The five subcommands.

use std::io::Write;
use std::path::Path;

use dce_core::bogoliubov::{
    beta_rl_semi, beta_rr_perfect_exact, beta_rr_semi_exact, beta_sq_rr_perfect, beta_sq_rr_semi,
    regime_check, Regime,
};
use dce_core::spectrum::{
    classify_statistics, particle_number_closed, particle_number_numeric, radiated_energy,
    radiated_energy_numeric, FitHints, SpectrumPoint,
};
use dce_core::verification::{run_group, Check, GROUPS};
use dce_core::{DceError, MirrorTrajectory, QuadratureConfig, ScatteringParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    BetaArgs, ClassifyArgs, EnergyArgs, Numerics, OmegaGrid, OmegaPrimeGrid, Physics, Source,
    Spacing, SpectrumArgs, VerifyArgs,
};
use crate::output::{emit, finite};
use crate::CliError;

/// Row status when every field is filled.
const OK: &str = "ok";

fn status_of(e: &DceError) -> &'static str {
    match e {
        DceError::NonConvergence { .. } => "nonconvergence",
        _ => "error",
    }
}

fn config_err(e: DceError) -> CliError {
    CliError::Config(e.to_string())
}

fn quadrature(n: &Numerics, rel: f64, abs: f64) -> Result<QuadratureConfig, CliError> {
    let cfg = QuadratureConfig {
        rel_tol: n.rel_tol.unwrap_or(rel),
        abs_tol: n.abs_tol.unwrap_or(abs),
        max_subdivisions: n.max_subdivisions,
        oscillation_hint: None,
    };
    cfg.validate().map_err(config_err)?;
    Ok(cfg)
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn setup(p: &Physics) -> Result<(MirrorTrajectory, ScatteringParams), CliError> {
    let traj = MirrorTrajectory::new(p.k, p.u0).map_err(config_err)?;
    let params = if p.alpha.is_infinite() {
        ScatteringParams::perfect()
    } else {
        ScatteringParams::new(p.alpha).map_err(config_err)?
    };
    Ok((traj, params))
}

/// `count` points from `min` to `max`, both included.
pub fn grid(name: &str, min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>, CliError> {
    if count == 0 {
        return Err(CliError::Config(format!("{name}: count must be >= 1")));
    }
    if !(min > 0.0 && min.is_finite() && max.is_finite()) {
        return Err(CliError::Config(format!("{name}: bounds must be positive and finite")));
    }
    if !(min < max) {
        return Err(CliError::Config(format!("{name}: need min < max, got {min} and {max}")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let n = (count - 1) as f64;
    let mut pts: Vec<f64> = (0..count)
        .map(|i| {
            let t = i as f64 / n;
            match spacing {
                Spacing::Linear => min + (max - min) * t,
                Spacing::Log => (min.ln() + (max / min).ln() * t).exp(),
            }
        })
        .collect();
    // endpoints exactly as given
    pts[0] = min;
    pts[count - 1] = max;
    Ok(pts)
}

fn single(name: &str, v: f64) -> Result<Vec<f64>, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(vec![v])
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

fn omega_values(g: &OmegaGrid, default: impl FnOnce() -> Vec<f64>) -> Result<Vec<f64>, CliError> {
    match (g.omega, g.omega_min, g.omega_max) {
        (Some(w), _, _) => single("omega", w),
        (None, Some(lo), Some(hi)) => grid("omega", lo, hi, g.omega_count, g.omega_spacing),
        _ => Ok(default()),
    }
}

fn omega_p_values(g: &OmegaPrimeGrid) -> Result<Vec<f64>, CliError> {
    match (g.omega_p, g.omega_p_min, g.omega_p_max) {
        (Some(w), _, _) => single("omega-p", w),
        (None, Some(lo), Some(hi)) => grid("omega-p", lo, hi, g.omega_p_count, g.omega_p_spacing),
        _ => Ok(vec![100.0]),
    }
}

/// Default spectrum grid: `omega/k` from 0.25 to 2.
fn default_spectrum_grid(k: f64) -> Vec<f64> {
    (0..8).map(|i| k * (0.25 + 0.25 * i as f64)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaRow {
    pub omega: f64,
    pub omega_p: f64,
    pub beta_sq_exact: Option<f64>,
    pub beta_sq_asym: Option<f64>,
    pub beta_sq_rl: Option<f64>,
    pub regime: &'static str,
    pub est_error: Option<f64>,
    pub status: &'static str,
}

#[derive(Debug, Serialize)]
struct Summary {
    rows: usize,
    ok: usize,
    failed: usize,
}

fn summarize(statuses: impl Iterator<Item = &'static str>) -> Summary {
    let mut s = Summary { rows: 0, ok: 0, failed: 0 };
    for st in statuses {
        s.rows += 1;
        if st == OK {
            s.ok += 1;
        } else {
            s.failed += 1;
        }
    }
    s
}

/// Late-time `|beta|^2` matching the regime of the point.
fn asymptotic(w: f64, wp: f64, k: f64, alpha: f64, regime: Regime) -> Result<f64, DceError> {
    match regime {
        Regime::TransparentLike => Ok(0.0),
        Regime::PerfectLike => beta_sq_rr_perfect(w, wp, k),
        Regime::Semitransparent => beta_sq_rr_semi(w, wp, k, alpha),
        Regime::OutOfAsymptoticWindow if alpha == 0.0 => Ok(0.0),
        Regime::OutOfAsymptoticWindow if alpha >= wp => beta_sq_rr_perfect(w, wp, k),
        Regime::OutOfAsymptoticWindow => beta_sq_rr_semi(w, wp, k, alpha),
    }
}

fn beta_row(
    w: f64,
    wp: f64,
    traj: &MirrorTrajectory,
    p: &ScatteringParams,
    cfg: &QuadratureConfig,
    rl: bool,
    diag: &mut Vec<String>,
) -> BetaRow {
    let mut status = OK;
    let mut fail = |e: DceError, what: &str, status: &mut &'static str| {
        diag.push(format!("omega={w} omega'={wp}: {what}: {e}"));
        if *status == OK {
            *status = status_of(&e);
        }
    };
    let regime = match regime_check(w, wp, traj, p) {
        Ok(r) => r.label,
        Err(e) => {
            fail(e, "regime", &mut status);
            Regime::OutOfAsymptoticWindow
        }
    };
    let exact = if p.is_perfect() {
        beta_rr_perfect_exact(w, wp, traj, cfg)
    } else {
        beta_rr_semi_exact(w, wp, traj, p, cfg)
    };
    let (beta_sq_exact, est_error) = match exact {
        Ok(b) => (finite(b.abs_sq), finite(b.abs_sq_error())),
        Err(e) => {
            fail(e, "exact", &mut status);
            (None, None)
        }
    };
    let beta_sq_asym = match asymptotic(w, wp, traj.k(), p.alpha(), regime) {
        Ok(v) => finite(v),
        Err(e) => {
            fail(e, "asymptotic", &mut status);
            None
        }
    };
    let beta_sq_rl = if rl {
        match beta_rl_semi(w, wp, traj, p, cfg) {
            Ok(b) => finite(b.abs_sq),
            Err(e) => {
                fail(e, "left-right", &mut status);
                None
            }
        }
    } else {
        None
    };
    BetaRow {
        omega: w,
        omega_p: wp,
        beta_sq_exact,
        beta_sq_asym,
        beta_sq_rl,
        regime: regime.as_str(),
        est_error,
        status,
    }
}

/// Runs `f` over `items` on the pool; results keep the input order.
fn ordered<T: Sync, R: Send>(
    threads: usize,
    items: &[T],
    f: impl Fn(&T) -> (R, Vec<String>) + Sync + Send,
) -> Result<(Vec<R>, Vec<String>), CliError> {
    let out: Vec<(R, Vec<String>)> = pool(threads)?.install(|| items.par_iter().map(&f).collect());
    let mut rows = Vec::with_capacity(out.len());
    let mut diag = Vec::new();
    for (r, d) in out {
        rows.push(r);
        diag.extend(d);
    }
    Ok((rows, diag))
}

fn report(diag: &[String], stderr: &mut dyn Write) {
    for d in diag {
        let _ = writeln!(stderr, "{d}");
    }
}

fn finish(failed: usize, what: &str) -> Result<(), CliError> {
    if failed > 0 {
        Err(CliError::Numeric(format!("{failed} {what} did not complete")))
    } else {
        Ok(())
    }
}

pub fn beta(a: &BetaArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let (traj, p) = setup(&a.physics)?;
    let cfg = quadrature(&a.numerics, 1e-9, 1e-12)?;
    let ws = omega_values(&a.omega, || vec![1.0])?;
    let wps = omega_p_values(&a.omega_p)?;
    let points: Vec<(f64, f64)> = ws.iter().flat_map(|&w| wps.iter().map(move |&wp| (w, wp))).collect();
    let (rows, diag) = ordered(a.numerics.threads, &points, |&(w, wp)| {
        let mut d = Vec::new();
        let row = beta_row(w, wp, &traj, &p, &cfg, a.rl, &mut d);
        (row, d)
    })?;
    report(&diag, stderr);
    let summary = summarize(rows.iter().map(|r| r.status));
    emit(&a.output, a, &rows, &summary, stdout)?;
    finish(summary.failed, "grid points")
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub omega: f64,
    pub n_numeric: Option<f64>,
    pub n_closed: Option<f64>,
    pub err: Option<f64>,
    pub status: &'static str,
}

fn finite_alpha(p: &Physics, command: &str) -> Result<(), CliError> {
    if p.alpha.is_infinite() {
        Err(CliError::Config(format!(
            "{command}: the perfect mirror's particle number diverges; give a finite alpha"
        )))
    } else {
        Ok(())
    }
}

fn spectrum_rows(
    physics: &Physics,
    ws: &[f64],
    numerics: &Numerics,
    source: Source,
) -> Result<(Vec<SpectrumRow>, Vec<String>), CliError> {
    let (traj, p) = setup(physics)?;
    let cfg = quadrature(numerics, 1e-4, 1e-12)?;
    let (k, alpha) = (physics.k, physics.alpha);
    ordered(numerics.threads, ws, |&w| {
        let mut d = Vec::new();
        let mut status = OK;
        let n_closed = match particle_number_closed(w, k, alpha) {
            Ok(n) => finite(n.n_omega),
            Err(e) => {
                d.push(format!("omega={w}: closed form: {e}"));
                status = status_of(&e);
                None
            }
        };
        let (n_numeric, err) = match source {
            Source::Closed => (None, None),
            Source::Numeric => match particle_number_numeric(w, &traj, &p, &cfg) {
                Ok(n) => (finite(n.n_omega), finite(n.err)),
                Err(e) => {
                    d.push(format!("omega={w}: numeric: {e}"));
                    if status == OK {
                        status = status_of(&e);
                    }
                    (None, None)
                }
            },
        };
        (
            SpectrumRow {
                omega: w,
                n_numeric,
                n_closed,
                err,
                status,
            },
            d,
        )
    })
}

pub fn spectrum(a: &SpectrumArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    finite_alpha(&a.physics, "spectrum")?;
    let ws = omega_values(&a.omega, || default_spectrum_grid(a.physics.k))?;
    let (rows, diag) = spectrum_rows(&a.physics, &ws, &a.numerics, Source::Numeric)?;
    report(&diag, stderr);
    let summary = summarize(rows.iter().map(|r| r.status));
    emit(&a.output, a, &rows, &summary, stdout)?;
    finish(summary.failed, "spectrum points")
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyRow {
    pub k: f64,
    pub alpha: f64,
    pub energy_numeric: Option<f64>,
    pub energy_closed: Option<f64>,
    pub abs_err: Option<f64>,
    pub status: &'static str,
}

pub fn energy(a: &EnergyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    finite_alpha(&a.physics, "energy")?;
    let (k, alpha) = (a.physics.k, a.physics.alpha);
    setup(&a.physics)?;
    let cfg = quadrature(&a.numerics, 1e-10, 1e-300)?;
    let closed = radiated_energy(k, alpha).map_err(config_err)?;
    let mut row = EnergyRow {
        k,
        alpha,
        energy_numeric: None,
        energy_closed: finite(closed),
        abs_err: None,
        status: OK,
    };
    match radiated_energy_numeric(k, alpha, &cfg).and_then(|r| r.require_converged("energy integral")) {
        Ok(r) => {
            row.energy_numeric = finite(r.value.re);
            row.abs_err = finite(r.abs_err);
        }
        Err(e) => {
            let _ = writeln!(stderr, "energy: {e}");
            row.status = status_of(&e);
        }
    }
    let summary = summarize(std::iter::once(row.status));
    emit(&a.output, a, std::slice::from_ref(&row), &summary, stdout)?;
    finish(summary.failed, "energy integrals")
}

#[derive(Debug, Clone, Serialize)]
pub struct FitRow {
    pub statistics: &'static str,
    pub amplitude: Option<f64>,
    pub k_fit: Option<f64>,
    pub residual: Option<f64>,
    pub rejected_residual: Option<f64>,
    pub ratio: Option<f64>,
    pub low_confidence: bool,
    pub points: usize,
}

/// Reads `(omega, column)` pairs from a spectrum CSV.
pub fn read_spectrum(path: &Path, column: &str) -> Result<Vec<SpectrumPoint>, CliError> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| CliError::Config(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Config(format!("{}: no column `{name}`", path.display())))
    };
    let wi = find("omega")?;
    let ni = find(column)?;
    let mut pts = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Config(e.to_string()))?;
        let parse = |i: usize, name: &str| -> Result<f64, CliError> {
            rec.get(i)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| CliError::Config(format!("row {}: `{name}` is empty", line + 1)))?
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("row {}: `{name}`: {e}", line + 1)))
        };
        pts.push(SpectrumPoint {
            omega: parse(wi, "omega")?,
            n_omega: parse(ni, column)?,
            err: 0.0,
        });
    }
    Ok(pts)
}

pub fn classify(a: &ClassifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let points = match &a.input {
        Some(path) => read_spectrum(path, &a.column)?,
        None => {
            finite_alpha(&a.physics, "classify")?;
            let ws = omega_values(&a.omega, || default_spectrum_grid(a.physics.k))?;
            let (rows, diag) = spectrum_rows(&a.physics, &ws, &a.numerics, a.source)?;
            report(&diag, stderr);
            if rows.iter().any(|r| r.status != OK) {
                return Err(CliError::Numeric("spectrum did not complete".into()));
            }
            rows.iter()
                .map(|r| SpectrumPoint {
                    omega: r.omega,
                    n_omega: match a.source {
                        Source::Numeric => r.n_numeric.unwrap_or(0.0),
                        Source::Closed => r.n_closed.unwrap_or(0.0),
                    },
                    err: r.err.unwrap_or(0.0),
                })
                .collect()
        }
    };
    let hints = FitHints {
        omega_power: a.omega_power,
        k_init: a.k_init,
    };
    let fit = classify_statistics(&points, &hints).map_err(|e| match e {
        DceError::FitFailure(_) => CliError::Numeric(e.to_string()),
        _ => CliError::Config(e.to_string()),
    })?;
    if fit.low_confidence {
        let _ = writeln!(stderr, "classify: low confidence, residual ratio {:.3}", fit.ratio);
    }
    let row = FitRow {
        statistics: fit.statistics.as_str(),
        amplitude: finite(fit.amplitude),
        k_fit: finite(fit.k_fit),
        residual: finite(fit.residual),
        rejected_residual: finite(fit.rejected_residual),
        ratio: finite(fit.ratio),
        low_confidence: fit.low_confidence,
        points: points.len(),
    };
    emit(&a.output, a, std::slice::from_ref(&row), &(), stdout)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl From<Check> for CheckRow {
    fn from(c: Check) -> Self {
        Self {
            group: c.group,
            name: c.name,
            passed: c.passed,
            detail: c.detail,
        }
    }
}

pub fn verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let groups: Vec<&str> = if a.group.is_empty() {
        GROUPS.to_vec()
    } else {
        let mut gs = Vec::new();
        for g in &a.group {
            let Some(found) = GROUPS.iter().find(|x| *x == g) else {
                return Err(CliError::Config(format!(
                    "unknown group `{g}`; known: {}",
                    GROUPS.join(", ")
                )));
            };
            gs.push(*found);
        }
        gs
    };
    let (chunks, _) = ordered(a.threads, &groups, |g| (run_group(g), Vec::new()))?;
    let checks: Vec<Check> = chunks.into_iter().flatten().collect();
    for c in &checks {
        let _ = writeln!(stderr, "{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    #[derive(Serialize)]
    struct VerifySummary {
        checks: usize,
        passed: usize,
        failed: usize,
    }
    let summary = VerifySummary {
        checks: checks.len(),
        passed: checks.len() - failed,
        failed,
    };
    let _ = writeln!(stderr, "{} checks, {} passed, {} failed", summary.checks, summary.passed, failed);
    let rows: Vec<CheckRow> = checks.into_iter().map(CheckRow::from).collect();
    emit(&a.output, a, &rows, &summary, stdout)?;
    if failed > 0 {
        Err(CliError::Verification(format!("{failed} checks failed")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid("w", 1.0, 3.0, 3, Spacing::Linear).unwrap(), vec![1.0, 2.0, 3.0]);
        let g = grid("w", 1.0, 100.0, 3, Spacing::Log).unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && g[2] == 100.0);
        assert_eq!(grid("w", 1.0, 2.0, 1, Spacing::Log).unwrap(), vec![1.0]);
        assert!(grid("w", 2.0, 1.0, 3, Spacing::Linear).is_err());
        assert!(grid("w", 1.0, 2.0, 0, Spacing::Linear).is_err());
        assert!(grid("w", -1.0, 2.0, 3, Spacing::Linear).is_err());
    }

    #[test]
    fn asymptotic_follows_regime() {
        let a = asymptotic(1.0, 100.0, 1.0, 1.0, Regime::Semitransparent).unwrap();
        assert_eq!(a, beta_sq_rr_semi(1.0, 100.0, 1.0, 1.0).unwrap());
        let a = asymptotic(1.0, 100.0, 1.0, f64::INFINITY, Regime::PerfectLike).unwrap();
        assert_eq!(a, beta_sq_rr_perfect(1.0, 100.0, 1.0).unwrap());
        assert_eq!(asymptotic(1.0, 100.0, 1.0, 0.0, Regime::TransparentLike).unwrap(), 0.0);
    }
}
