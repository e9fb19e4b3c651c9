//! Adaptive complex Gauss-Kronrod quadrature.
//!
//! A 21-point Kronrod rule with its embedded 10-point Gauss rule is applied on
//! panels kept in a max-heap keyed by error; the worst panel is bisected until
//! the summed error meets `max(abs_tol, rel_tol * |I|)` or the panel budget is
//! spent. Oscillatory integrands are pre-split so that no initial panel spans
//! more than one period of the supplied phase rate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{DceError, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Points per panel evaluation.
pub const RULE_POINTS: usize = 21;

/// Tolerances and panel budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Characteristic phase rate `beta` of the integrand, if oscillatory.
    pub oscillation_hint: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 10_000,
            oscillation_hint: None,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_hint(mut self, beta: f64) -> Self {
        self.oscillation_hint = Some(beta);
        self
    }

    pub fn without_hint(mut self) -> Self {
        self.oscillation_hint = None;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DceError::ParameterDomain {
                    name,
                    value: v,
                    reason: "tolerance must be positive and finite",
                });
            }
        }
        if self.max_subdivisions == 0 {
            return Err(DceError::ParameterDomain {
                name: "max_subdivisions",
                value: 0.0,
                reason: "must be >= 1",
            });
        }
        if let Some(h) = self.oscillation_hint {
            if !h.is_finite() {
                return Err(DceError::ParameterDomain {
                    name: "oscillation_hint",
                    value: h,
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }

    fn tolerance_for(&self, value: Complex64) -> f64 {
        let v = value.norm();
        if v.is_finite() {
            self.abs_tol.max(self.rel_tol * v)
        } else {
            0.0
        }
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_err: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    /// Turns an unconverged result into [`DceError::NonConvergence`].
    pub fn require_converged(self, context: &'static str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(DceError::NonConvergence {
                context,
                abs_err: self.abs_err,
                evaluations: self.evaluations,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // ties broken by position so the refinement order is deterministic
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK[10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kron += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * half;
    let diff = ((kron - gauss) * half).norm();
    let floor = 50.0 * f64::EPSILON * resabs * half.abs();
    let err = diff.max(floor);
    Panel {
        a,
        b,
        value,
        err: if err.is_finite() { err } else { f64::INFINITY },
    }
}

fn oscillation_panels(a: f64, b: f64, hint: Option<f64>, cap: usize) -> usize {
    match hint {
        Some(beta) if beta != 0.0 => {
            let n = (beta.abs() * (b - a) / (2.0 * PI)).ceil();
            (n.max(1.0) as usize).min(cap.max(1))
        }
        _ => 1,
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(DceError::ParameterDomain {
            name: "a",
            value: a,
            reason: "integration limit must be finite",
        });
    }
    if !b.is_finite() {
        return Err(DceError::ParameterDomain {
            name: "b",
            value: b,
            reason: "integration limit must be finite",
        });
    }
    if a > b {
        return Err(DceError::ParameterDomain {
            name: "b",
            value: b,
            reason: "upper limit below lower limit",
        });
    }
    Ok(())
}

/// `int_a^b f(x) dx` for finite `a <= b`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_breaks(f, &[a, b], cfg)
}

/// Integrates over `[points[0], points[last]]`, starting from the panels
/// delimited by the sorted `points`; each is further split by the hint.
pub fn integrate_breaks<F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(DceError::InvalidInput(
            "need at least two integration limits".into(),
        ));
    }
    for w in points.windows(2) {
        check_interval(w[0], w[1])?;
    }

    let spans: Vec<(f64, f64)> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    if spans.is_empty() {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            abs_err: 0.0,
            evaluations: 1,
            converged: true,
        });
    }

    let budget = cfg.max_subdivisions;
    let per_span_cap = (budget / 2 / spans.len()).max(1);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for &(a, b) in &spans {
        let n = oscillation_panels(a, b, cfg.oscillation_hint, per_span_cap);
        let h = (b - a) / n as f64;
        for i in 0..n {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == n { b } else { a + (i + 1) as f64 * h };
            heap.push(gk21(&f, lo, hi));
            evaluations += RULE_POINTS;
        }
    }

    let mut total: Complex64 = heap.iter().map(|p| p.value).sum();
    let mut total_err: f64 = heap.iter().map(|p| p.err).sum();
    let mut converged = false;
    let mut since_resum = 0usize;
    loop {
        if total_err <= cfg.tolerance_for(total) {
            converged = true;
            break;
        }
        if heap.len() >= budget {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval at machine resolution; cannot refine further
            heap.push(worst);
            break;
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        evaluations += 2 * RULE_POINTS;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        since_resum += 1;
        if since_resum == 64 || !total_err.is_finite() {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.err).sum();
            since_resum = 0;
        }
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: Complex64 = panels.iter().map(|p| p.value).sum();
    let abs_err: f64 = panels.iter().map(|p| p.err).sum();
    let converged = converged && abs_err <= cfg.tolerance_for(value);
    Ok(QuadratureResult {
        value,
        abs_err,
        evaluations,
        converged,
    })
}

/// Points splitting `[a, b]` where a monotone `phase` advances by `2 pi`.
///
/// At most `max_panels` panels are produced; endpoints are included.
pub fn phase_breakpoints<P>(a: f64, b: f64, phase: P, max_panels: usize) -> Vec<f64>
where
    P: Fn(f64) -> f64,
{
    let pa = phase(a);
    let total = phase(b) - pa;
    if !(b > a) || !total.is_finite() {
        return vec![a, b];
    }
    let n = ((total.abs() / (2.0 * PI)).ceil() as usize).clamp(1, max_panels.max(1));
    let step = total / n as f64;
    let sign = total.signum();
    let mut points = Vec::with_capacity(n + 1);
    points.push(a);
    let mut lo = a;
    for j in 1..n {
        let target = pa + j as f64 * step;
        let (mut l, mut h) = (lo, b);
        for _ in 0..100 {
            let m = 0.5 * (l + h);
            if m <= l || m >= h {
                break;
            }
            if sign * (phase(m) - target) < 0.0 {
                l = m;
            } else {
                h = m;
            }
        }
        let t = 0.5 * (l + h);
        if t > lo && t < b {
            points.push(t);
            lo = t;
        }
    }
    points.push(b);
    points
}

/// Asymptotic model for `f` beyond the truncation point `Lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// `|f(x)| <= C x^{-p}` with `p > 1`.
    PowerLaw(f64),
    /// `|f(x)| <= C e^{-rate x}` with `rate > 0`.
    Exponential(f64),
}

impl TailModel {
    fn validate(&self) -> Result<()> {
        match *self {
            TailModel::PowerLaw(p) if !(p > 1.0) || !p.is_finite() => {
                Err(DceError::DivergentTail(p))
            }
            TailModel::Exponential(r) if !(r > 0.0) || !r.is_finite() => {
                Err(DceError::ParameterDomain {
                    name: "rate",
                    value: r,
                    reason: "exponential tail rate must be positive",
                })
            }
            _ => Ok(()),
        }
    }

    /// `int_lambda^inf` of the model matched to `f(lambda)`.
    fn tail(&self, f_lambda: Complex64, lambda: f64) -> Complex64 {
        match *self {
            TailModel::PowerLaw(p) => f_lambda * lambda / (p - 1.0),
            TailModel::Exponential(r) => f_lambda / r,
        }
    }
}

const MAX_DOUBLINGS: usize = 200;

/// `int_a^inf f(x) dx` for `|f| ~ x^{-tail_exponent}`.
pub fn integrate_semi_infinite<F>(
    f: F,
    a: f64,
    tail_exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_semi_infinite_with(f, a, TailModel::PowerLaw(tail_exponent), cfg)
}

/// Semi-infinite integration with an explicit tail model.
///
/// Integrates on `[a, Lambda]`, doubling the span until the model tail matched
/// at `Lambda` is within tolerance, then adds that tail and folds its modulus
/// into `abs_err`.
pub fn integrate_semi_infinite_with<F>(
    f: F,
    a: f64,
    model: TailModel,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    model.validate()?;
    cfg.validate()?;
    if !a.is_finite() {
        return Err(DceError::ParameterDomain {
            name: "a",
            value: a,
            reason: "integration limit must be finite",
        });
    }

    let first_width = match model {
        TailModel::PowerLaw(_) => a.abs().max(1.0),
        TailModel::Exponential(r) => 1.0 / r,
    };
    let mut lo = a;
    let mut hi = a + first_width;
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_err = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    for _ in 0..MAX_DOUBLINGS {
        let seg = integrate(&f, lo, hi, cfg)?;
        value += seg.value;
        abs_err += seg.abs_err;
        evaluations += seg.evaluations;
        converged &= seg.converged;

        let f_hi = f(hi);
        evaluations += 1;
        let tail = model.tail(f_hi, hi);
        if tail.norm() <= cfg.tolerance_for(value) {
            let total = value + tail;
            abs_err += tail.norm();
            return Ok(QuadratureResult {
                value: total,
                abs_err,
                evaluations,
                converged: converged && abs_err <= 2.0 * cfg.tolerance_for(total),
            });
        }
        lo = hi;
        hi = a + 2.0 * (hi - a);
    }
    Ok(QuadratureResult {
        value,
        abs_err: f64::INFINITY,
        evaluations,
        converged: false,
    })
}
