//! Certified real zeros of `χ̂_Ω`.
//!
//! The numeric scan works on `g` over `(ξ₀, R)`, where `(0, ξ₀]` is zero-free
//! because `|χ̂(ξ)| ≥ |Ω| − ξ · sup|χ̂′|`. A subinterval is discarded when both
//! endpoint values exceed `sup|g′| · width / 2` (plus rounding). Surviving
//! subintervals are localized by Newton steps on `|g|²`; with `m` a lower bound
//! of `|g′|` on the hull, the projection of `g` onto the direction of `g′` is
//! strictly monotone there, so any zero lies within `|g(ξ*)| / m` of `ξ*`.
//! The component of `g(ξ*)` orthogonal to `g′(ξ*)` cannot be cancelled by a
//! real step except through the curvature term, which gives a second exclusion
//! test. Zeros are found on `(0, R)` and mirrored, using `|g(−ξ)| = |g(ξ)|`.
//!
//! On the exact path `g(ξ) = w^d · P(w)` with `w = e^{−2πiξ/N}` and
//! `P ∈ ℤ[w]`. Roots of `P` that are roots of unity give exact cosets of `Nℤ`.

use num_integer::Integer;
use num_traits::Zero as _;
use serde::Serialize;

use crate::cyclotomic::{orders_up_to_degree, root_of_unity_sum_vanishes};
use crate::error::{Error, Result};
use crate::fourier::FourierEvaluator;
use crate::interval::IntervalUnion;
use crate::real::{Rational, Real};

const EVAL_BUDGET: usize = 20_000_000;

/// A real zero `value` of `χ̂_Ω`, localized to `[value − radius, value + radius]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Zero {
    pub value: f64,
    pub radius: f64,
    /// `false` for possibly-multiple (tangential) zeros.
    pub certified: bool,
}

/// Exact zero set on the rational path: `⋃ (offset + modulus·ℤ)` minus `{0}`,
/// plus numerically located unit-circle roots that are not roots of unity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetDescription {
    pub modulus: i64,
    pub offsets: Vec<Real>,
    pub multiplicities: Vec<u32>,
    pub extra_offsets: Vec<f64>,
}

impl CosetDescription {
    fn offsets_q(&self) -> impl Iterator<Item = Rational> + '_ {
        self.offsets.iter().map(|o| o.as_rational().expect("exact offset"))
    }

    /// Index of the coset containing the rational `xi` (ignores `xi = 0`).
    pub fn coset_of(&self, xi: Rational) -> Option<usize> {
        let n = Rational::from_integer(self.modulus);
        self.offsets_q()
            .position(|r| ((xi - r) / n).is_integer())
    }

    /// Distance from `xi` to the nearest coset point (including the
    /// non-cyclotomic extras), reduced modulo `modulus`.
    pub fn distance(&self, xi: f64) -> f64 {
        let n = self.modulus as f64;
        let t = xi.rem_euclid(n);
        self.offsets
            .iter()
            .map(Real::to_f64)
            .chain(self.extra_offsets.iter().copied())
            .map(|o| {
                let d = (t - o).abs();
                d.min(n - d)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Exact coset points in `[lo, hi]`, zero excluded, sorted.
    pub fn points_in(&self, lo: Rational, hi: Rational) -> Vec<Rational> {
        let n = Rational::from_integer(self.modulus);
        let mut out = Vec::new();
        for r in self.offsets_q() {
            let kmin = ((lo - r) / n).ceil().to_integer();
            let kmax = ((hi - r) / n).floor().to_integer();
            for k in kmin..=kmax {
                let p = r + n * Rational::from_integer(k);
                if !p.is_zero() {
                    out.push(p);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Certified zeros of `χ̂_Ω` on `(−R, R)`.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    radius: f64,
    tol: f64,
    zeros: Vec<Zero>,
    cosets: Option<CosetDescription>,
    evaluator: FourierEvaluator,
}

impl ZeroSet {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// All zeros in `(−R, R)`, sorted and symmetric about 0.
    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn positive_zeros(&self) -> &[Zero] {
        let start = self.zeros.partition_point(|z| z.value < 0.0);
        &self.zeros[start..]
    }

    pub fn cosets(&self) -> Option<&CosetDescription> {
        self.cosets.as_ref()
    }

    pub fn evaluator(&self) -> &FourierEvaluator {
        &self.evaluator
    }

    pub fn omega(&self) -> &IntervalUnion {
        self.evaluator.omega()
    }

    /// Smallest positive zero: a lower bound for every gap of a spectrum.
    pub fn min_positive_zero(&self) -> Option<f64> {
        self.positive_zeros().first().map(|z| z.value)
    }

    /// Smallest distance between consecutive zeros in the window.
    pub fn min_separation(&self) -> Option<f64> {
        self.zeros
            .windows(2)
            .map(|w| w[1].value - w[0].value)
            .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))))
    }
}

/// Outcome of a zero test with its witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroTest {
    pub is_zero: bool,
    pub exact: bool,
    pub witness: ZeroWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroWitness {
    /// `ξ = 0`, where `χ̂ = |Ω| > 0`.
    Origin { chi_hat_abs: f64 },
    Coset { offset: Real, modulus: i64 },
    Matched { zero: f64, radius: f64 },
    Value { chi_hat_abs: f64 },
}

enum Localized {
    Excluded,
    Found(Zero),
    Unresolved { gabs: f64, at: f64 },
}

struct Scanner<'a> {
    ev: &'a FourierEvaluator,
    l1: f64,
    l2: f64,
    accept: f64,
    h_stop: f64,
    floor: f64,
    evals: usize,
}

impl Scanner<'_> {
    fn abs_g(&mut self, x: f64) -> f64 {
        self.evals += 1;
        self.ev.g(x).norm()
    }

    fn run(&mut self, lo: f64, hi: f64, h0: f64) -> Result<Vec<Zero>> {
        let mut out = Vec::new();
        if hi <= lo {
            return Ok(out);
        }
        let cells = ((hi - lo) / h0).ceil().max(1.0) as usize;
        let step = (hi - lo) / cells as f64;
        let mut stack: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(cells);
        let mut prev_x = lo;
        let mut prev_g = self.abs_g(lo);
        for i in 1..=cells {
            let x = if i == cells { hi } else { lo + step * i as f64 };
            let gx = self.abs_g(x);
            stack.push((prev_x, prev_g, x, gx));
            prev_x = x;
            prev_g = gx;
        }
        stack.reverse();
        while let Some((a, ga, b, gb)) = stack.pop() {
            if self.evals > EVAL_BUDGET {
                return Err(Error::BudgetExceeded(format!(
                    "zero scan exceeded {EVAL_BUDGET} evaluations"
                )));
            }
            let w = b - a;
            let slack = (ga - self.ev.g_rounding_bound(a)).min(gb - self.ev.g_rounding_bound(b));
            if slack > self.l1 * w / 2.0 {
                continue;
            }
            if w > self.h_stop {
                let m = 0.5 * (a + b);
                let gm = self.abs_g(m);
                stack.push((m, gm, b, gb));
                stack.push((a, ga, m, gm));
                continue;
            }
            match self.localize(a, b) {
                Localized::Excluded => {}
                Localized::Found(z) => out.push(z),
                Localized::Unresolved { gabs, at } => {
                    if w > self.floor {
                        let m = 0.5 * (a + b);
                        let gm = self.abs_g(m);
                        stack.push((m, gm, b, gb));
                        stack.push((a, ga, m, gm));
                    } else if gabs <= self.accept {
                        out.push(Zero {
                            value: at,
                            radius: w.max(self.floor),
                            certified: false,
                        });
                    } else {
                        return Err(Error::BudgetExceeded(format!(
                            "could not resolve near-zero |g| = {gabs:e} at {at}"
                        )));
                    }
                }
            }
        }
        Ok(out)
    }

    fn localize(&mut self, lo: f64, hi: f64) -> Localized {
        let span = hi - lo;
        let mut x = 0.5 * (lo + hi);
        let mut best = (self.abs_g(x), x);
        for _ in 0..60 {
            self.evals += 2;
            let gx = self.ev.g(x);
            let dx = self.ev.g_derivative(x);
            if gx.norm() < best.0 {
                best = (gx.norm(), x);
            }
            let dn = dx.norm();
            if dn == 0.0 {
                break;
            }
            let u = dx / dn;
            let v = (u.conj() * gx).re;
            let step = v / dn;
            let next = (x - step).clamp(lo - span, hi + span);
            let moved = (next - x).abs();
            x = next;
            if moved <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                break;
            }
        }
        self.evals += 2;
        let gx = self.ev.g(x);
        let dx = self.ev.g_derivative(x);
        if gx.norm() < best.0 {
            best = (gx.norm(), x);
        }
        let (hlo, hhi) = (lo.min(x), hi.max(x));
        let rho = (x - hlo).max(hhi - x);
        let dn = dx.norm();
        let m_lo = dn - self.l2 * rho;
        if !(m_lo > 0.0) {
            return Localized::Unresolved {
                gabs: best.0,
                at: best.1,
            };
        }
        let rb = self.ev.g_rounding_bound(x);
        let eps = (gx.norm() + rb) / m_lo;
        if x + eps < lo || x - eps > hi {
            return Localized::Excluded;
        }
        let u = dx / dn;
        let perp = (u.conj() * gx).im.abs();
        if perp - rb - self.l2 * eps * eps / 2.0 > 0.0 {
            return Localized::Excluded;
        }
        if gx.norm() <= self.accept {
            return Localized::Found(Zero {
                value: x,
                radius: eps.max(4.0 * f64::EPSILON * x.abs().max(1.0)),
                certified: true,
            });
        }
        Localized::Unresolved {
            gabs: best.0,
            at: best.1,
        }
    }
}

fn merge_duplicates(mut zs: Vec<Zero>) -> Vec<Zero> {
    zs.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut out: Vec<Zero> = Vec::with_capacity(zs.len());
    for z in zs {
        if let Some(last) = out.last_mut() {
            let slack = 64.0 * f64::EPSILON * z.value.abs().max(1.0) + 1e-12;
            if z.value - last.value <= last.radius + z.radius + slack {
                if z.certified && !last.certified {
                    *last = z;
                }
                continue;
            }
        }
        out.push(z);
    }
    out
}

/// Positive zeros of `χ̂_Ω` below `radius`.
fn scan_positive(omega: &IntervalUnion, radius: f64, tol: f64) -> Result<Vec<Zero>> {
    let (lo, hi) = omega.hull();
    let center = 0.5 * (lo.to_f64() + hi.to_f64());
    let centered = omega.translated_f64(-center);
    let ev = FourierEvaluator::new(&centered);
    let maxabs = centered.max_abs_endpoint().max(1e-300);
    let l1 = ev.derivative_bound();
    let l1_orig = FourierEvaluator::new(omega).derivative_bound();
    // |χ̂′| ≤ 2π ∫|t| ≤ 2π |Ω| maxabs, so |χ̂| ≥ |Ω|/2 on [0, 1/(4π maxabs)].
    let xi0 = 1.0 / (4.0 * std::f64::consts::PI * maxabs);
    let h0 = (0.1 / maxabs).min(0.05);
    let mut scanner = Scanner {
        ev: &ev,
        l1,
        l2: ev.second_derivative_bound(),
        accept: tol * l1.min(l1_orig),
        h_stop: h0 / 16.0,
        floor: (1e-13 * radius.max(1.0)).max(tol * 1e-3),
        evals: 0,
    };
    let found = scanner.run(xi0.min(radius), radius, h0)?;
    let mut zs = merge_duplicates(found);
    zs.retain(|z| z.value > 0.0 && z.value < radius);
    Ok(zs)
}

/// Zeros of `χ̂_Ω` on `(−R, R)`; attaches the exact coset description when
/// `Ω` has rational endpoints.
pub fn find_zeros(omega: &IntervalUnion, radius: f64, tol: f64) -> Result<ZeroSet> {
    if !(radius > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "find_zeros needs R > 0 and tol > 0, got R={radius}, tol={tol}"
        )));
    }
    let positive = scan_positive(omega, radius, tol)?;
    let cosets = match omega.denominator() {
        Some(n) => {
            let span = n as f64;
            let extra_source = if radius > span + 0.5 {
                positive.clone()
            } else {
                scan_positive(omega, span + 0.5, tol.min(1e-10))?
            };
            Some(cosets_with_extras(omega, &extra_source)?)
        }
        None => None,
    };
    let positive = match &cosets {
        Some(desc) => snap_to_cosets(positive, desc, radius),
        None => positive,
    };
    let mut zeros: Vec<Zero> = positive
        .iter()
        .rev()
        .map(|z| Zero {
            value: -z.value,
            ..*z
        })
        .collect();
    zeros.extend(positive.iter().copied());
    Ok(ZeroSet {
        radius,
        tol,
        zeros,
        cosets,
        evaluator: FourierEvaluator::new(omega),
    })
}

/// Replaces numeric zeros whose localization ball holds a rational zero by
/// that rational zero; multiple roots otherwise show up as clusters.
fn snap_to_cosets(numeric: Vec<Zero>, desc: &CosetDescription, radius: f64) -> Vec<Zero> {
    let hi = Rational::from_integer(radius.ceil() as i64);
    let exact: Vec<f64> = desc
        .points_in(Rational::zero(), hi)
        .iter()
        .map(|r| rational_f64(*r))
        .filter(|&x| x > 0.0 && x < radius)
        .collect();
    let mut out: Vec<Zero> = numeric
        .into_iter()
        .filter(|z| {
            let slack = z.radius + 64.0 * f64::EPSILON * z.value.abs().max(1.0);
            !exact.iter().any(|x| (x - z.value).abs() <= slack)
        })
        .collect();
    out.extend(exact.into_iter().map(|value| Zero {
        value,
        radius: 0.0,
        certified: true,
    }));
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    out
}

fn rational_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn falling_factorial(e: i64, k: u32) -> Option<i64> {
    (0..k as i64).try_fold(1i64, |acc, i| acc.checked_mul(e - i))
}

fn cyclotomic_part(omega: &IntervalUnion) -> Result<(i64, Vec<(Rational, u32)>)> {
    let (n, alphas, betas) = omega
        .scaled_endpoints()
        .ok_or_else(|| Error::NotRational("interval union has float endpoints".into()))?;
    let shift = alphas[0];
    let mut terms: Vec<(i64, i64)> = Vec::with_capacity(2 * alphas.len());
    for (a, b) in alphas.iter().zip(&betas) {
        terms.push((1, a - shift));
        terms.push((-1, b - shift));
    }
    let degree = (betas[betas.len() - 1] - shift) as u64;
    let mut out = Vec::new();
    for m in orders_up_to_degree(degree) {
        if !root_of_unity_sum_vanishes(&terms, m)? {
            continue;
        }
        let mut mult = 1u32;
        while mult < 16 {
            let deriv: Option<Vec<(i64, i64)>> = terms
                .iter()
                .map(|&(c, e)| falling_factorial(e, mult).and_then(|f| f.checked_mul(c)).map(|c| (c, e)))
                .collect();
            let deriv = deriv.ok_or(Error::Overflow)?;
            if root_of_unity_sum_vanishes(&deriv, m)? {
                mult += 1;
            } else {
                break;
            }
        }
        for k in 0..m {
            if k.gcd(&m) != 1 {
                continue;
            }
            let num = n.checked_mul(((m - k) % m) as i64).ok_or(Error::Overflow)?;
            out.push((Rational::new(num, m as i64), mult));
        }
    }
    out.sort();
    Ok((n, out))
}

fn cosets_with_extras(omega: &IntervalUnion, positive: &[Zero]) -> Result<CosetDescription> {
    let (n, exact) = cyclotomic_part(omega)?;
    let mut desc = CosetDescription {
        modulus: n,
        offsets: exact.iter().map(|&(r, _)| Real::Exact(r)).collect(),
        multiplicities: exact.iter().map(|&(_, m)| m).collect(),
        extra_offsets: Vec::new(),
    };
    let span = n as f64;
    let extras: Vec<f64> = positive
        .iter()
        .filter(|z| z.value < span)
        .filter(|z| desc.distance(z.value) > z.radius.max(1e-9))
        .map(|z| z.value)
        .collect();
    desc.extra_offsets = extras;
    Ok(desc)
}

/// Exact coset description of `{χ̂_Ω = 0}` for rational `Ω`.
pub fn rational_zero_cosets(omega: &IntervalUnion) -> Result<CosetDescription> {
    let n = omega
        .denominator()
        .ok_or_else(|| Error::NotRational("interval union has float endpoints".into()))?;
    let positive = scan_positive(omega, n as f64 + 0.5, 1e-10)?;
    cosets_with_extras(omega, &positive)
}

/// Tests whether `ξ` is a zero of `χ̂_Ω`: exactly via cosets when both the
/// zero set and `ξ` are rational, otherwise by matching a certified zero.
pub fn is_zero(zs: &ZeroSet, xi: &Real, tol: f64) -> Result<ZeroTest> {
    if xi.is_zero() {
        return Ok(ZeroTest {
            is_zero: false,
            exact: xi.is_exact(),
            witness: ZeroWitness::Origin {
                chi_hat_abs: zs.evaluator.measure(),
            },
        });
    }
    let value = || zs.evaluator.chi_hat_at(xi).norm();
    if let (Some(c), Real::Exact(q)) = (&zs.cosets, xi) {
        return Ok(match c.coset_of(*q) {
            Some(i) => ZeroTest {
                is_zero: true,
                exact: true,
                witness: ZeroWitness::Coset {
                    offset: c.offsets[i],
                    modulus: c.modulus,
                },
            },
            None => ZeroTest {
                is_zero: false,
                exact: true,
                witness: ZeroWitness::Value {
                    chi_hat_abs: value(),
                },
            },
        });
    }
    let x = xi.to_f64();
    if x.abs() < zs.radius {
        let i = zs.zeros.partition_point(|z| z.value < x);
        let nearest = [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter_map(|j| zs.zeros.get(j))
            .min_by(|a, b| (a.value - x).abs().total_cmp(&(b.value - x).abs()));
        if let Some(z) = nearest {
            if (z.value - x).abs() <= tol.max(z.radius) {
                return Ok(ZeroTest {
                    is_zero: true,
                    exact: false,
                    witness: ZeroWitness::Matched {
                        zero: z.value,
                        radius: z.radius,
                    },
                });
            }
        }
        return Ok(ZeroTest {
            is_zero: false,
            exact: false,
            witness: ZeroWitness::Value {
                chi_hat_abs: value(),
            },
        });
    }
    match &zs.cosets {
        Some(c) => {
            let d = c.distance(x);
            Ok(ZeroTest {
                is_zero: d <= tol,
                exact: false,
                witness: if d <= tol {
                    ZeroWitness::Matched {
                        zero: x,
                        radius: d,
                    }
                } else {
                    ZeroWitness::Value {
                        chi_hat_abs: value(),
                    }
                },
            })
        }
        None => Err(Error::OutsideWindow(x)),
    }
}
