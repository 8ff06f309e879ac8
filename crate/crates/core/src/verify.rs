//! Orthogonality, packing and tiling checks for candidate spectra, and the
//! translational tiling check for `Ω`.
//!
//! `F(x) = Σ_λ |χ̂_Ω(x − λ)|²` is evaluated as a certified interval: the
//! partial sum over `|x − λ| ≤ R` is a lower bound, and the tail on each side
//! is bounded from the distance `d` of the first excluded point by
//! `(n/π)² (1/d² + 1/(δd))`, half the two-sided [`TailBound`] at radius `d`.
//! Because `d` jumps by at least `δ` when the radius passes a point, the upper
//! end of the interval never increases with `R`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fourier::{cis_neg_2pi, tail_sum_bound, FourierEvaluator, TailBound};
use crate::interval::IntervalUnion;
use crate::real::{Rational, Real};
use crate::spectrum::{PeriodicSpectrum, SpectrumWindow};

/// Default bound on `|χ̂|` for a numeric zero in the orthogonality check.
pub const DEFAULT_ORTHOGONALITY_TOL: f64 = 1e-8;
/// Default tolerance of the tiling check.
pub const DEFAULT_TILING_TOL: f64 = 1e-6;

const MAX_TILING_TERMS: f64 = 5e10;
const MAX_CELLS: i64 = 10_000_000;
const RENORMALIZE_EVERY: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Zeros,
    Packing,
    Tiling,
    TranslationalTiling,
    Period,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Evidence attached to a failed check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `λ − μ` is not a zero of `χ̂_Ω`.
    Pair {
        lambda: Real,
        mu: Real,
        difference: Real,
        chi_hat_abs: f64,
    },
    /// Certified enclosure `F(x) ∈ [lo, hi]` missing the target level.
    Sample { x: f64, lo: f64, hi: f64 },
    /// `Σ_s χ_Ω(x − s) = count ≠ 1`.
    Coverage { x: Real, count: i64 },
    /// `point = source + T` is absent from the window.
    Missing { point: Real, source: Real },
}

/// One certified sample of `F`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FSample {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub condition: Condition,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub parameters: BTreeMap<String, Value>,
    #[serde(flatten)]
    pub metrics: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<FSample>,
}

impl VerificationReport {
    fn new(condition: Condition) -> Self {
        VerificationReport {
            condition,
            verdict: Verdict::Inconclusive,
            witness: None,
            parameters: BTreeMap::new(),
            metrics: BTreeMap::new(),
            samples: Vec::new(),
        }
    }

    fn param(&mut self, k: &str, v: impl Serialize) -> &mut Self {
        self.parameters.insert(k.into(), json!(v));
        self
    }

    fn metric(&mut self, k: &str, v: impl Serialize) -> &mut Self {
        self.metrics.insert(k.into(), json!(v));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn metric_f64(&self, k: &str) -> Option<f64> {
        self.metrics.get(k).and_then(Value::as_f64)
    }

    pub fn parameter_f64(&self, k: &str) -> Option<f64> {
        self.parameters.get(k).and_then(Value::as_f64)
    }
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Zero test for a difference, exact whenever both inputs are rational.
pub(crate) struct DifferenceOracle<'a> {
    ev: &'a FourierEvaluator,
    tol: f64,
    memo: HashMap<Rational, bool>,
}

impl<'a> DifferenceOracle<'a> {
    pub(crate) fn new(ev: &'a FourierEvaluator, tol: f64) -> Self {
        DifferenceOracle {
            ev,
            tol,
            memo: HashMap::new(),
        }
    }

    /// `(is_zero, exact)`; `d = 0` is never a zero.
    pub(crate) fn test(&mut self, d: &Real) -> (bool, bool) {
        if d.is_zero() {
            return (false, d.is_exact());
        }
        if let (Real::Exact(q), true) = (d, self.ev.omega().is_exact()) {
            let q = q.abs();
            if let Some(&v) = self.memo.get(&q) {
                return (v, true);
            }
            if let Ok(v) = self.ev.g_vanishes_exact(q) {
                self.memo.insert(q, v);
                return (v, true);
            }
        }
        (self.ev.chi_hat_at(d).norm() <= self.tol, false)
    }
}

/// `Λ − Λ ⊆ {0} ∪ {χ̂_Ω = 0}` on a finite window.
pub fn check_zeros_condition(
    window: &SpectrumWindow,
    omega: &IntervalUnion,
    tol: f64,
) -> Result<VerificationReport> {
    if window.len() < 2 {
        return Err(Error::InsufficientData(
            "orthogonality needs at least two points".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let ev = FourierEvaluator::new(omega);
    let mut oracle = DifferenceOracle::new(&ev, tol);
    let pts = window.points();
    let mut report = VerificationReport::new(Condition::Zeros);
    report
        .param("tol", tol)
        .param("points", pts.len())
        .param("omega", omega.pairs());
    let mut all_exact = true;
    let mut max_abs = 0.0f64;
    let mut pairs = 0usize;
    'outer: for j in 1..pts.len() {
        for i in 0..j {
            let d = pts[j] - pts[i];
            let (ok, exact) = oracle.test(&d);
            all_exact &= exact;
            pairs += 1;
            let v = ev.chi_hat_at(&d).norm();
            max_abs = max_abs.max(v);
            if !ok {
                report.verdict = Verdict::Fail;
                report.witness = Some(Witness::Pair {
                    lambda: pts[j],
                    mu: pts[i],
                    difference: d,
                    chi_hat_abs: v,
                });
                break 'outer;
            }
        }
    }
    if report.witness.is_none() {
        report.verdict = Verdict::Pass;
    }
    report
        .metric("pairs_checked", pairs)
        .metric("exact", all_exact)
        .metric("max_abs_chi_hat", max_abs);
    if let Some(g) = window.min_gap() {
        report.metric("min_gap", g.to_f64());
    }
    Ok(report)
}

/// A point set for which `F` can be evaluated.
#[derive(Clone, Copy, Debug)]
pub enum SpectrumSource<'a> {
    Window(&'a SpectrumWindow),
    Periodic(&'a PeriodicSpectrum),
}

impl SpectrumSource<'_> {
    fn min_gap(&self) -> Result<f64> {
        match self {
            SpectrumSource::Window(w) => w
                .min_gap()
                .map(|g| g.to_f64())
                .ok_or_else(|| Error::InsufficientData("window needs two points".into())),
            SpectrumSource::Periodic(p) => Ok(p.min_gap().to_f64()),
        }
    }
}

/// Certified enclosure of `F(x)` truncated at radius `R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PackingInterval {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    pub radius: f64,
    /// Tail bound added to the partial sum (both sides).
    pub tail: f64,
    pub terms: usize,
}

fn term_with_error(ev: &FourierEvaluator, y: f64) -> (f64, f64) {
    if y.abs() < 1e-6 {
        let v = ev.chi_hat(y).norm_sqr();
        return (v, 1e-14 * v + 1e-300);
    }
    let g = ev.g(y);
    let e = ev.g_rounding_bound(y) + 8.0 * f64::EPSILON * y.abs() * ev.derivative_bound();
    let den = 4.0 * PI * PI * y * y;
    let gn = g.norm();
    (gn * gn / den, (2.0 * gn * e + e * e) / den + 4.0 * f64::EPSILON * gn * gn / den)
}

fn side_tail(omega: &IntervalUnion, delta: f64, d: f64) -> Result<f64> {
    Ok(0.5 * tail_sum_bound(omega, delta, d)?.value())
}

/// `F(x) = Σ_λ |χ̂_Ω(x − λ)|²` enclosed in `[lo, hi]`.
pub fn packing_value(
    omega: &IntervalUnion,
    source: SpectrumSource<'_>,
    x: f64,
    radius: f64,
) -> Result<PackingInterval> {
    if !(radius > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "packing needs finite x and R > 0, got x={x}, R={radius}"
        )));
    }
    let delta = source.min_gap()?;
    let ev = FourierEvaluator::new(omega);
    let mut acc = Accumulator::default();
    let mut err = 0.0;
    let mut terms = 0usize;
    let (mut d_right, mut d_left) = (f64::INFINITY, f64::INFINITY);
    let mut visit = |lam: f64| {
        let y = x - lam;
        if y.abs() <= radius {
            let (v, e) = term_with_error(&ev, y);
            acc.add(v);
            err += e;
            terms += 1;
        } else if y > 0.0 {
            d_right = d_right.min(y);
        } else {
            d_left = d_left.min(-y);
        }
    };
    match source {
        SpectrumSource::Window(w) => {
            let (min, max) = w.span().expect("two points");
            if min.to_f64() > x - radius || max.to_f64() < x + radius {
                return Err(Error::InsufficientData(format!(
                    "window [{min}, {max}] does not cover [{}, {}]",
                    x - radius,
                    x + radius
                )));
            }
            for p in w.points() {
                visit(p.to_f64());
            }
        }
        SpectrumSource::Periodic(p) => {
            let t = p.period().to_f64();
            for b in p.base() {
                let b = b.to_f64();
                let kmin = ((x - radius - b) / t).floor() as i64 - 1;
                let kmax = ((x + radius - b) / t).ceil() as i64 + 1;
                for k in kmin..=kmax {
                    visit(b + k as f64 * t);
                }
            }
        }
    }
    let d_right = if d_right.is_finite() { d_right } else { radius };
    let d_left = if d_left.is_finite() { d_left } else { radius };
    let tail = side_tail(omega, delta, d_right)? + side_tail(omega, delta, d_left)?;
    let lo = acc.value();
    let round = err + 4.0 * f64::EPSILON * lo * (terms as f64).log2().max(1.0);
    Ok(PackingInterval {
        x,
        lo: (lo - round).max(0.0),
        hi: lo + round + tail,
        radius,
        tail,
        terms,
    })
}

/// Lower bound of `F(x)` from a partial base, for search pruning.
pub(crate) fn partial_packing_lower_bound(
    ev: &FourierEvaluator,
    base: &[f64],
    period: f64,
    x: f64,
    radius: f64,
) -> f64 {
    let mut acc = Accumulator::default();
    let mut err = 0.0;
    for &b in base {
        let kmin = ((x - radius - b) / period).ceil() as i64;
        let kmax = ((x + radius - b) / period).floor() as i64;
        for k in kmin..=kmax {
            let (v, e) = term_with_error(ev, x - b - k as f64 * period);
            acc.add(v);
            err += e;
        }
    }
    acc.value() - err - 8.0 * f64::EPSILON * acc.value()
}

/// Fast certified `F(x)` for a periodic set: exponentials are advanced by the
/// fixed rotation `e^{2πi a T}` and recomputed every few hundred steps.
struct PeriodicEvaluator<'a> {
    ev: &'a FourierEvaluator,
    omega: &'a IntervalUnion,
    freqs: Vec<f64>,
    signs: Vec<f64>,
    rotations: Vec<Complex64>,
    base: Vec<f64>,
    period: f64,
    delta: f64,
    err_const: f64,
    err_slope: f64,
}

impl<'a> PeriodicEvaluator<'a> {
    fn new(ev: &'a FourierEvaluator, p: &PeriodicSpectrum) -> Self {
        let mut freqs = ev.lefts().to_vec();
        freqs.extend_from_slice(ev.rights());
        let n = ev.n();
        let signs = (0..2 * n).map(|i| if i < n { 1.0 } else { -1.0 }).collect();
        let period = p.period().to_f64();
        let rotations = freqs.iter().map(|a| cis_neg_2pi(-a * period)).collect();
        let eps = f64::EPSILON;
        let steps = RENORMALIZE_EVERY as f64;
        let err_const = freqs
            .iter()
            .map(|a| steps * (8.0 * eps + 2.0 * PI * (a * period).abs() * eps) + 8.0 * eps)
            .sum();
        let err_slope = freqs.iter().map(|a| 8.0 * PI * a.abs() * eps).sum();
        PeriodicEvaluator {
            ev,
            omega: ev.omega(),
            freqs,
            signs,
            rotations,
            base: p.base().iter().map(Real::to_f64).collect(),
            period,
            delta: p.min_gap().to_f64(),
            err_const,
            err_slope,
        }
    }

    fn eval(&self, x: f64, radius: f64) -> Result<FSample> {
        let t = self.period;
        let mut acc = Accumulator::default();
        let mut err = 0.0;
        let (mut d_right, mut d_left) = (f64::INFINITY, f64::INFINITY);
        let mut cur = vec![Complex64::new(0.0, 0.0); self.freqs.len()];
        let mut terms = 0usize;
        for &b in &self.base {
            let y0 = x - b;
            let kmin = ((y0 - radius) / t).ceil() as i64;
            let kmax = ((y0 + radius) / t).floor() as i64;
            // y = y0 − kT decreases in k: k = kmin − 1 is the first point beyond +R.
            d_right = d_right.min(y0 - (kmin - 1) as f64 * t);
            d_left = d_left.min((kmax + 1) as f64 * t - y0);
            let mut since = RENORMALIZE_EVERY;
            for k in kmin..=kmax {
                let y = y0 - k as f64 * t;
                if y.abs() < 1.0 {
                    let (v, e) = term_with_error(self.ev, y);
                    acc.add(v);
                    err += e;
                    since = RENORMALIZE_EVERY;
                    continue;
                }
                if since >= RENORMALIZE_EVERY {
                    for (c, a) in cur.iter_mut().zip(&self.freqs) {
                        *c = cis_neg_2pi(a * y);
                    }
                    since = 0;
                } else {
                    for (c, r) in cur.iter_mut().zip(&self.rotations) {
                        *c *= r;
                    }
                    since += 1;
                }
                let g: Complex64 = cur.iter().zip(&self.signs).map(|(c, s)| c * s).sum();
                let den = 4.0 * PI * PI * y * y;
                let gn = g.norm();
                let e = self.err_const + self.err_slope * y.abs();
                acc.add(gn * gn / den);
                err += (2.0 * gn * e + e * e) / den;
                terms += 1;
            }
        }
        let tail = side_tail(self.omega, self.delta, d_right)?
            + side_tail(self.omega, self.delta, d_left)?;
        let lo = acc.value();
        let round = err + 4.0 * f64::EPSILON * lo * (terms.max(2) as f64).log2();
        Ok(FSample {
            x,
            lo: (lo - round).max(0.0),
            hi: lo + round + tail,
        })
    }
}

/// Radius `R` with `C(R)/R ≤ tol/2`, where `C(R)` is the tail constant valid
/// from `R` on.
fn truncation_radius(omega: &IntervalUnion, delta: f64, tol: f64) -> Result<TailBound> {
    let n = omega.n() as f64;
    let c_inf = 2.0 * n * n / (PI * PI * delta);
    let r0 = 2.0 * c_inf / tol;
    let c0 = tail_sum_bound(omega, delta, r0)?.constant;
    let r = 2.0 * c0 / tol * (1.0 + 1e-7);
    tail_sum_bound(omega, delta, r)
}

/// `sup |F′| ≤ 4π |Ω|^{3/2} (∫_Ω (t − c)² dt)^{1/2}` for orthogonal `Λ`,
/// from Bessel's inequality applied to `χ̂` and `χ̂′` of the centred set.
pub fn tiling_lipschitz(omega: &IntervalUnion) -> f64 {
    let m = omega.measure_f64();
    let c = omega.centroid();
    4.0 * PI * m.powf(1.5) * omega.second_moment_about(c).sqrt()
}

/// `Σ_λ |χ̂_Ω|²(x − λ) = |Ω|²` on a grid over one period, certified at
/// every sample.
pub fn check_tiling_condition(
    omega: &IntervalUnion,
    spectrum: &PeriodicSpectrum,
    grid_step: f64,
    tol: f64,
) -> Result<VerificationReport> {
    if !(grid_step > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(
            "grid step and tolerance must be positive".into(),
        ));
    }
    let period = spectrum.period().to_f64();
    let count = (period / grid_step).ceil().max(1.0) as usize;
    let delta = spectrum.min_gap().to_f64();
    let bound = truncation_radius(omega, delta, tol)?;
    let radius = bound.radius;
    let work = count as f64 * 2.0 * (radius + period + 1.0) / period * spectrum.base().len() as f64;
    if work > MAX_TILING_TERMS {
        return Err(Error::BudgetExceeded(format!(
            "tolerance {tol} needs about {work:.3e} terms"
        )));
    }
    let level = omega.measure_f64().powi(2);
    let ev = FourierEvaluator::new(omega);
    let pe = PeriodicEvaluator::new(&ev, spectrum);
    let samples: Vec<FSample> = (0..count)
        .into_par_iter()
        .map(|i| {
            let x = period * i as f64 / count as f64;
            pe.eval(x, radius.max(2.0 * x.abs() + 1.0))
        })
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(Condition::Tiling);
    let h = period / count as f64;
    let lip = tiling_lipschitz(omega);
    report
        .param("tol", tol)
        .param("grid_step", h)
        .param("samples", count)
        .param("radius", radius)
        .param("tail_constant", bound.constant)
        .param("tail_bound", bound.value())
        .param("min_gap", delta)
        .param("level", level)
        .param("lipschitz", lip)
        .param("omega", omega.pairs())
        .param("spectrum", spectrum);
    let dev = |s: &FSample| (s.hi - level).max(level - s.lo);
    let max_dev = samples.iter().map(dev).fold(0.0, f64::max);
    let failing: Vec<&FSample> = samples
        .iter()
        .filter(|s| s.hi < level - tol || s.lo > level + tol)
        .collect();
    report
        .metric("max_dev", max_dev)
        .metric("everywhere_bound", max_dev + lip * h / 2.0)
        .metric("min_lo", samples.iter().map(|s| s.lo).fold(f64::INFINITY, f64::min))
        .metric("max_hi", samples.iter().map(|s| s.hi).fold(0.0, f64::max))
        .metric("failing_samples", failing.len());
    if let Some(worst) = failing
        .iter()
        .max_by(|a, b| dev(a).total_cmp(&dev(b)))
    {
        report.verdict = Verdict::Fail;
        report.witness = Some(Witness::Sample {
            x: worst.x,
            lo: worst.lo,
            hi: worst.hi,
        });
    } else {
        report.verdict = Verdict::Pass;
    }
    report.samples = samples;
    Ok(report)
}

/// Tiling for a finite window: completeness cannot be decided from finitely
/// many points, so the verdict is always inconclusive.
pub fn check_window_tiling(omega: &IntervalUnion, window: &SpectrumWindow) -> VerificationReport {
    let mut report = VerificationReport::new(Condition::Tiling);
    report
        .param("omega", omega.pairs())
        .param("points", window.len())
        .metric("reason", "finite window without a period: tails are unknown");
    report
}

fn count_translates(
    intervals: &[(Rational, Rational)],
    base: &[Rational],
    period: Rational,
    x: Rational,
) -> i64 {
    let mut count = 0;
    for &b in base {
        for &(l, r) in intervals {
            let lo = (x - b - r) / period;
            let hi = (x - b - l) / period;
            count += (hi.ceil() - lo.floor()).to_integer() - 1;
        }
    }
    count
}

fn count_translates_f64(intervals: &[(f64, f64)], base: &[f64], period: f64, x: f64) -> i64 {
    let mut count = 0;
    for &b in base {
        for &(l, r) in intervals {
            let lo = (x - b - r) / period;
            let hi = (x - b - l) / period;
            count += (hi.ceil() - lo.floor()) as i64 - 1;
        }
    }
    count
}

/// `Σ_{s∈S} χ_Ω(x − s) = 1` almost everywhere, for periodic `S`.
///
/// On the exact path all endpoints of all translates lie on the grid
/// `ℤ/L`, so the count is constant on each open cell and one midpoint per
/// cell decides. On the float path samples avoid translate endpoints.
pub fn check_translational_tiling(
    omega: &IntervalUnion,
    translates: &PeriodicSpectrum,
    grid_step: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(Condition::TranslationalTiling);
    report
        .param("omega", omega.pairs())
        .param("translates", translates);
    let exact = omega.is_exact() && translates.is_exact();
    let (checked, failure) = if exact {
        let q = |r: &Real| r.as_rational().expect("exact");
        let period = q(&translates.period());
        let base: Vec<Rational> = translates.base().iter().map(q).collect();
        let intervals: Vec<(Rational, Rational)> = omega
            .intervals()
            .iter()
            .map(|iv| (q(&iv.left), q(&iv.right)))
            .collect();
        let l = base
            .iter()
            .map(|b| *b.denom())
            .fold(omega.denominator().expect("exact").lcm(period.denom()), |a, d| a.lcm(&d));
        let cells = (period * Rational::from_integer(l)).to_integer();
        if cells > MAX_CELLS {
            return Err(Error::BudgetExceeded(format!("{cells} cells")));
        }
        report.param("cell_width", Real::exact(1, l)).param("cells", cells);
        let failure = (0..cells).find_map(|k| {
            let mid = Rational::new(2 * k + 1, 2 * l);
            let c = count_translates(&intervals, &base, period, mid);
            (c != 1).then_some(Witness::Coverage {
                x: Real::Exact(mid),
                count: c,
            })
        });
        (cells as usize, failure)
    } else {
        if !(grid_step > 0.0) {
            return Err(Error::InvalidParameter("grid step must be positive".into()));
        }
        let period = translates.period().to_f64();
        let base: Vec<f64> = translates.base().iter().map(Real::to_f64).collect();
        let intervals: Vec<(f64, f64)> = omega
            .lefts_f64()
            .into_iter()
            .zip(omega.rights_f64())
            .collect();
        let count = (period / grid_step).ceil().max(1.0) as usize;
        let h = period / count as f64;
        let near_endpoint = |x: f64| {
            base.iter().any(|b| {
                intervals.iter().any(|&(l, r)| {
                    [l, r].iter().any(|e| {
                        let y = (x - b - e) / period;
                        (y - y.round()).abs() * period <= 1e-9 * (1.0 + x.abs())
                    })
                })
            })
        };
        let mut failure = None;
        for i in 0..count {
            let mut x = h * (i as f64 + 0.5);
            let mut attempt = 0;
            while near_endpoint(x) {
                attempt += 1;
                if attempt > 8 {
                    return Err(Error::InvalidParameter(format!(
                        "sample near {x} keeps hitting translate endpoints"
                    )));
                }
                x = h * (i as f64 + (0.5 + 0.618_033_988_749_895 * attempt as f64).fract());
            }
            let c = count_translates_f64(&intervals, &base, period, x);
            if c != 1 {
                failure = Some(Witness::Coverage {
                    x: Real::Float(x),
                    count: c,
                });
                break;
            }
        }
        report.param("grid_step", h).param("samples", count);
        (count, failure)
    };
    report.metric("exact", exact).metric("checked", checked);
    report.verdict = if failure.is_some() {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    report.witness = failure;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> IntervalUnion {
        IntervalUnion::normalize(&[(Real::exact(-1, 2), Real::exact(1, 2))]).unwrap()
    }

    fn two() -> IntervalUnion {
        IntervalUnion::normalize(&[
            (Real::int(0), Real::exact(1, 2)),
            (Real::int(1), Real::exact(3, 2)),
        ])
        .unwrap()
    }

    fn ints(lo: i64, hi: i64) -> SpectrumWindow {
        SpectrumWindow::new((lo..=hi).map(Real::int).collect()).unwrap()
    }

    fn periodic(base: &[Real], t: i64) -> PeriodicSpectrum {
        PeriodicSpectrum::new(base.to_vec(), Real::int(t)).unwrap()
    }

    #[test]
    fn zeros_condition_examples() {
        let r = check_zeros_condition(&ints(-5, 5), &unit(), 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.metrics["exact"], json!(true));

        let mut pts: Vec<Real> = (0..=3).map(Real::int).collect();
        pts.extend((0..3).map(|k| Real::float(k as f64 + 0.3)));
        let pts: Vec<Real> = pts.into_iter().map(|p| Real::float(p.to_f64())).collect();
        let w = SpectrumWindow::new(pts).unwrap();
        let r = check_zeros_condition(&w, &unit(), 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        match r.witness.unwrap() {
            Witness::Pair {
                lambda,
                mu,
                chi_hat_abs,
                ..
            } => {
                assert_eq!(lambda.to_f64(), 0.3);
                assert_eq!(mu.to_f64(), 0.0);
                let expect = (0.3 * PI).sin() / (0.3 * PI);
                assert!((chi_hat_abs - expect).abs() < 1e-12);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let w = SpectrumWindow::new(vec![
            Real::int(0),
            Real::exact(1, 2),
            Real::int(2),
            Real::exact(5, 2),
        ])
        .unwrap();
        let r = check_zeros_condition(&w, &two(), 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.metrics["exact"], json!(true));
    }

    #[test]
    fn packing_examples() {
        let z = periodic(&[Real::int(0)], 1);
        let p = packing_value(&unit(), SpectrumSource::Periodic(&z), 0.0, 50.0).unwrap();
        assert!((p.lo - 1.0).abs() < 1e-12);
        assert!(p.hi >= 1.0 && p.hi - p.lo < 2.0 / (PI * PI * 50.0) * 2.1);

        let p = packing_value(&unit(), SpectrumSource::Periodic(&z), 0.5, 50.0).unwrap();
        let brute: f64 = (-49..=50)
            .map(|n: i64| {
                let y = 0.5 - n as f64;
                ((PI * y).sin() / (PI * y)).powi(2)
            })
            .sum();
        assert!((p.lo - brute).abs() < 1e-11);
        assert!(p.lo < 1.0 && p.hi > 1.0);

        let even = periodic(&[Real::int(0)], 2);
        let p = packing_value(&unit(), SpectrumSource::Periodic(&even), 0.5, 200.0).unwrap();
        assert!((p.lo - 0.5).abs() < 0.01 && p.hi < 0.51);
    }

    #[test]
    fn packing_window_requires_coverage() {
        let w = ints(-10, 10);
        assert!(packing_value(&unit(), SpectrumSource::Window(&w), 0.0, 20.0).is_err());
        let p = packing_value(&unit(), SpectrumSource::Window(&w), 0.25, 5.0).unwrap();
        assert!(p.lo <= p.hi);
    }

    #[test]
    fn tiling_fails_for_even_integers() {
        let even = periodic(&[Real::int(0)], 2);
        let r = check_tiling_condition(&unit(), &even, 0.25, 1e-3).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let at_half = r.samples.iter().find(|s| s.x == 0.5).unwrap();
        assert!(at_half.hi < 0.9);
    }

    #[test]
    fn tiling_passes_loose() {
        let z = periodic(&[Real::int(0)], 1);
        let r = check_tiling_condition(&unit(), &z, 0.1, 1e-3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let p = periodic(&[Real::int(0), Real::exact(1, 2)], 2);
        let r = check_tiling_condition(&two(), &p, 0.1, 1e-3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.metrics);
    }

    #[test]
    fn fast_path_matches_direct() {
        let p = periodic(&[Real::int(0), Real::exact(1, 2)], 2);
        let omega = two();
        let ev = FourierEvaluator::new(&omega);
        let pe = PeriodicEvaluator::new(&ev, &p);
        for x in [0.0, 0.123, 0.77, 1.5] {
            let fast = pe.eval(x, 3000.0).unwrap();
            let direct = packing_value(&omega, SpectrumSource::Periodic(&p), x, 3000.0).unwrap();
            assert!((fast.lo - direct.lo).abs() < 1e-10, "{x} {fast:?} {direct:?}");
            assert!((fast.hi - direct.hi).abs() < 1e-10, "{x} {fast:?} {direct:?}");
            assert!(fast.lo <= direct.hi && direct.lo <= fast.hi);
        }
    }

    #[test]
    fn translational_tiling_examples() {
        let one = IntervalUnion::normalize(&[(Real::int(0), Real::int(1))]).unwrap();
        let z = periodic(&[Real::int(0)], 1);
        assert!(check_translational_tiling(&one, &z, 0.1).unwrap().passed());
        let p = periodic(&[Real::int(0), Real::exact(1, 2)], 2);
        assert!(check_translational_tiling(&two(), &p, 0.1).unwrap().passed());
        let even = periodic(&[Real::int(0)], 2);
        let r = check_translational_tiling(&one, &even, 0.1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(
            r.witness,
            Some(Witness::Coverage {
                x: Real::exact(3, 2),
                count: 0
            })
        );
        let onef = IntervalUnion::from_floats(&[(0.0, 1.0)]).unwrap();
        let evenf = PeriodicSpectrum::new(vec![Real::float(0.0)], Real::float(2.0)).unwrap();
        let r = check_translational_tiling(&onef, &evenf, 0.1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let zf = PeriodicSpectrum::new(vec![Real::float(0.0)], Real::float(1.0)).unwrap();
        assert!(check_translational_tiling(&onef, &zf, 0.1).unwrap().passed());
    }

    #[test]
    fn truncation_radius_meets_tolerance() {
        let b = truncation_radius(&unit(), 1.0, 1e-6).unwrap();
        assert!(b.value() <= 5e-7);
        assert!(b.value() > 4.9e-7);
    }
}
