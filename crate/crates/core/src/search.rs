//! Depth-first search for periodic spectra `base + Tℤ` with `0 ∈ base`.
//!
//! Base points are drawn from the zero set of `χ̂_Ω` in `(0, T)`: the exact
//! cosets on the rational path, certified numeric zeros otherwise. Two base
//! points `c, c′` are compatible when `c − c′ + kT` is a zero for every `k` in
//! the horizon. On the rational path the zero set is `N`-periodic, so a
//! horizon of `N / gcd(N, T)` periods covers every residue and the check is
//! exact for all `k`. A base of `T·|Ω|` mutually compatible points is an
//! orthogonal periodic set of density `|Ω|`; it is returned only after it
//! passes the tiling check.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::FourierEvaluator;
use crate::interval::IntervalUnion;
use crate::real::{Rational, Real};
use crate::spectrum::{reduce_mod, PeriodicSpectrum, SpectrumWindow};
use crate::verify::{
    check_tiling_condition, partial_packing_lower_bound, DifferenceOracle, Verdict,
};
use crate::zeros::{find_zeros, rational_zero_cosets};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Largest integer period tried.
    pub max_period: u32,
    pub node_budget: u64,
    /// Points per period at which partial packing sums are sampled;
    /// `None` uses `T`.
    pub packing_samples: Option<usize>,
    /// Minimum number of periods for wrapped differences.
    pub horizon: u32,
    pub zero_tol: f64,
    pub orthogonality_tol: f64,
    pub tiling_tol: f64,
    pub grid_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_period: 4,
            node_budget: 1_000_000,
            packing_samples: None,
            horizon: 3,
            zero_tol: 1e-10,
            orthogonality_tol: 1e-8,
            tiling_tol: 1e-6,
            grid_step: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundSpectrum {
    pub spectrum: PeriodicSpectrum,
    /// All compatibility tests were exact.
    pub exact: bool,
    pub tiling_verdict: Verdict,
    pub tiling_max_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    /// Sorted by `(period, base)`.
    pub spectra: Vec<FoundSpectrum>,
    pub nodes: u64,
    /// Results are partial when set.
    pub budget_exhausted: bool,
    pub exact: bool,
    pub rejected_by_tiling: usize,
    pub pruned_by_packing: u64,
}

struct Candidates {
    points: Vec<Real>,
    exact: bool,
}

/// Horizon in periods for wrapped differences.
fn horizon(omega: &IntervalUnion, period: i64, min: u32, exact: bool) -> i64 {
    match omega.denominator() {
        Some(n) if exact => (n / n.gcd(&period)).max(min as i64),
        _ => min as i64,
    }
}

/// All `c_i − c_j + kT` (`|k| ≤ K`, nonzero) are zeros of `χ̂_Ω`.
fn compatible(oracle: &mut DifferenceOracle<'_>, a: &Real, b: &Real, t: &Real, k_max: i64) -> (bool, bool) {
    let mut exact = true;
    for k in -k_max..=k_max {
        let d = *a - *b + *t * Real::int(k);
        if d.is_zero() {
            continue;
        }
        let (ok, ex) = oracle.test(&d);
        exact &= ex;
        if !ok {
            return (false, exact);
        }
    }
    (true, exact)
}

/// Closes `partial ⊂ [0, T)` into `partial + Tℤ` when every wrapped
/// difference within the horizon is a zero of `χ̂_Ω`.
pub fn close_period(
    omega: &IntervalUnion,
    partial: &SpectrumWindow,
    period: i64,
    tol: f64,
) -> Result<Option<PeriodicSpectrum>> {
    if period < 1 {
        return Err(Error::InvalidParameter("period must be a positive integer".into()));
    }
    let t = Real::int(period);
    let pts = partial.points();
    if pts.is_empty() || pts.iter().any(|p| p.to_f64() < 0.0 || *p >= t) {
        return Err(Error::InvalidParameter(format!(
            "partial base must be a nonempty subset of [0, {period})"
        )));
    }
    let ev = FourierEvaluator::new(omega);
    let mut oracle = DifferenceOracle::new(&ev, tol);
    let k_max = horizon(omega, period, 3, partial.is_exact());
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[..=i] {
            if !compatible(&mut oracle, a, b, &t, k_max).0 {
                return Ok(None);
            }
        }
    }
    PeriodicSpectrum::new(pts.to_vec(), t).map(Some)
}

fn candidates(omega: &IntervalUnion, period: i64, cfg: &SearchConfig) -> Result<Candidates> {
    let t = period as f64;
    if omega.is_exact() {
        let cosets = rational_zero_cosets(omega)?;
        let mut points: Vec<Real> = cosets
            .points_in(Rational::from_integer(0), Rational::from_integer(period))
            .into_iter()
            .filter(|q| *q < Rational::from_integer(period))
            .map(Real::Exact)
            .collect();
        let n = cosets.modulus as f64;
        let exact = cosets.extra_offsets.is_empty();
        for e in &cosets.extra_offsets {
            let mut v = *e;
            while v < t {
                if v > 0.0 {
                    points.push(Real::Float(v));
                }
                v += n;
            }
        }
        points.sort_by(Real::total_cmp);
        Ok(Candidates { points, exact })
    } else {
        let zs = find_zeros(omega, t + 1.0, cfg.zero_tol)?;
        let points = zs
            .positive_zeros()
            .iter()
            .filter(|z| z.value < t - 1e-9)
            .map(|z| Real::Float(z.value))
            .collect();
        Ok(Candidates { points, exact: false })
    }
}

fn approx_set_eq(a: &[Real], b: &[Real]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, 1e-9))
}

fn lex_cmp(a: &[Real], b: &[Real]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        if !x.approx_eq(y, 1e-9) {
            return x.total_cmp(y);
        }
    }
    a.len().cmp(&b.len())
}

fn sorted_mod(points: impl Iterator<Item = Real>, t: Real) -> Vec<Real> {
    let mut v: Vec<Real> = points.map(|p| reduce_mod(p, t)).collect();
    v.sort_by(Real::total_cmp);
    v
}

/// Minimal integer period, then the lexicographically smallest translate
/// with `0` in the base.
fn canonicalize(base: &[Real], period: i64) -> (Vec<Real>, i64) {
    let t = Real::int(period);
    let mut base = sorted_mod(base.iter().copied(), t);
    let mut period = period;
    for d in (1..period).filter(|d| period % d == 0) {
        let shifted = sorted_mod(base.iter().map(|b| *b + Real::int(d)), t);
        if approx_set_eq(&shifted, &base) {
            let dr = Real::int(d);
            base.retain(|b| *b < dr && !b.approx_eq(&dr, 1e-9));
            period = d;
            break;
        }
    }
    let t = Real::int(period);
    let best = base
        .iter()
        .map(|b0| {
            let mut v = sorted_mod(base.iter().map(|b| *b - *b0), t);
            if let Some(first) = v.first_mut() {
                if first.approx_eq(&Real::int(0), 1e-9) {
                    *first = Real::int(0);
                }
            }
            v
        })
        .min_by(|a, b| lex_cmp(a, b))
        .expect("nonempty base");
    (best, period)
}

struct Dfs<'a> {
    compat: &'a [Vec<bool>],
    size: usize,
    ev: &'a FourierEvaluator,
    points: &'a [f64],
    period: f64,
    samples: Vec<f64>,
    radius: f64,
    ceiling: f64,
    nodes: &'a AtomicU64,
    budget: u64,
    exhausted: &'a AtomicBool,
    pruned: &'a AtomicU64,
}

impl Dfs<'_> {
    fn run(&self, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if self.exhausted.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return;
        }
        if chosen.len() > 1 && self.packing_exceeded(chosen) {
            self.pruned.fetch_add(1, Ordering::Relaxed);
            return;
        }
        if chosen.len() == self.size {
            out.push(chosen.clone());
            return;
        }
        let start = chosen.last().map_or(0, |&l| l + 1);
        for c in start.max(1)..self.compat.len() {
            if chosen.iter().all(|&p| self.compat[p][c]) {
                chosen.push(c);
                self.run(chosen, out);
                chosen.pop();
            }
        }
    }

    fn packing_exceeded(&self, chosen: &[usize]) -> bool {
        let base: Vec<f64> = chosen.iter().map(|&i| self.points[i]).collect();
        self.samples.iter().any(|&x| {
            partial_packing_lower_bound(self.ev, &base, self.period, x, self.radius) > self.ceiling
        })
    }
}

/// Periodic spectra of `Ω` with integer period `T ≤ max_period` and base
/// drawn from the zero set, verified by the tiling check.
pub fn search_spectra(omega: &IntervalUnion, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.max_period < 1 {
        return Err(Error::InvalidParameter("max_period must be at least 1".into()));
    }
    let measure = omega.measure_f64();
    let level = measure * measure;
    let ev = FourierEvaluator::new(omega);
    let nodes = AtomicU64::new(0);
    let pruned = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let mut all_exact = true;
    let mut found: Vec<(Vec<Real>, i64, bool)> = Vec::new();

    for period in 1..=cfg.max_period as i64 {
        let size_f = period as f64 * measure;
        if (size_f - size_f.round()).abs() > 1e-9 || size_f.round() < 1.0 {
            continue;
        }
        let size = size_f.round() as usize;
        let cands = candidates(omega, period, cfg)?;
        all_exact &= cands.exact;
        let t = Real::int(period);
        let mut pts = vec![Real::int(0)];
        pts.extend(cands.points.iter().copied());
        let k_max = horizon(omega, period, cfg.horizon, cands.exact);
        let mut oracle = DifferenceOracle::new(&ev, cfg.orthogonality_tol);
        let (self_ok, self_exact) = compatible(&mut oracle, &pts[0], &pts[0], &t, k_max);
        all_exact &= self_exact;
        if !self_ok {
            continue;
        }
        let mut compat = vec![vec![false; pts.len()]; pts.len()];
        let mut pair_exact = true;
        for i in 0..pts.len() {
            compat[i][i] = true;
            for j in 0..i {
                let (ok, ex) = compatible(&mut oracle, &pts[i], &pts[j], &t, k_max);
                pair_exact &= ex;
                compat[i][j] = ok;
                compat[j][i] = ok;
            }
        }
        let floats: Vec<f64> = pts.iter().map(Real::to_f64).collect();
        let samples_n = cfg.packing_samples.unwrap_or(period as usize).max(1);
        let dfs = Dfs {
            compat: &compat,
            size,
            ev: &ev,
            points: &floats,
            period: period as f64,
            samples: (0..samples_n)
                .map(|s| period as f64 * s as f64 / samples_n as f64)
                .collect(),
            radius: period as f64 * cfg.horizon.max(1) as f64,
            ceiling: level + cfg.tiling_tol,
            nodes: &nodes,
            budget: cfg.node_budget,
            exhausted: &exhausted,
            pruned: &pruned,
        };
        let mut bases: Vec<Vec<usize>> = if size == 1 {
            let mut out = Vec::new();
            dfs.run(&mut vec![0], &mut out);
            out
        } else {
            (1..pts.len())
                .into_par_iter()
                .filter(|&c| compat[0][c])
                .flat_map_iter(|c| {
                    let mut out = Vec::new();
                    dfs.run(&mut vec![0, c], &mut out);
                    out
                })
                .collect()
        };
        bases.sort();
        for b in bases {
            let base: Vec<Real> = b.iter().map(|&i| pts[i]).collect();
            let exact = pair_exact && base.iter().all(Real::is_exact);
            found.push((base, period, exact));
        }
    }

    let mut canon: Vec<(Vec<Real>, i64, bool)> = Vec::new();
    for (base, period, exact) in found {
        let (b, p) = canonicalize(&base, period);
        if !canon
            .iter()
            .any(|(cb, cp, _)| *cp == p && approx_set_eq(cb, &b))
        {
            canon.push((b, p, exact));
        }
    }
    canon.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| lex_cmp(&a.0, &b.0)));

    let mut spectra = Vec::new();
    let mut rejected = 0;
    for (base, period, exact) in canon {
        let spectrum = PeriodicSpectrum::new(base, Real::int(period))?;
        let report = check_tiling_condition(omega, &spectrum, cfg.grid_step, cfg.tiling_tol)?;
        if report.passed() {
            spectra.push(FoundSpectrum {
                spectrum,
                exact,
                tiling_verdict: report.verdict,
                tiling_max_dev: report.metric_f64("max_dev").unwrap_or(f64::NAN),
            });
        } else {
            rejected += 1;
        }
    }
    Ok(SearchOutcome {
        spectra,
        nodes: nodes.load(Ordering::Relaxed),
        budget_exhausted: exhausted.load(Ordering::Relaxed),
        exact: all_exact,
        rejected_by_tiling: rejected,
        pruned_by_packing: pruned.load(Ordering::Relaxed),
    })
}
