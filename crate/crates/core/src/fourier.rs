//! Fourier transform of the indicator of a finite union of intervals.
//!
//! For `Ω = ⋃ (a_j, b_j)`,
//!
//! ```text
//! χ̂_Ω(ξ) = g(ξ) / (2πiξ),   g(ξ) = Σ_j e^{−2πi a_j ξ} − e^{−2πi b_j ξ}.
//! ```
//!
//! Each pair is evaluated as `2i sin(π w_j ξ) e^{−πi s_j ξ}` with
//! `w_j = b_j − a_j` and `s_j = a_j + b_j`, which avoids the cancellation
//! the raw difference suffers near `ξ = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::real::{Rational, Real};

/// Below this `|ξ|`, `χ̂` is evaluated from its Taylor form.
pub const SMALL_XI: f64 = 1e-6;

/// `t` reduced into `(−1, 1]` modulo 2.
fn reduce_mod2(t: f64) -> f64 {
    t - 2.0 * (t / 2.0).round()
}

/// `u / v` reduced modulo 2 exactly, then rounded once to a double.
fn reduce_mod2_rational(u: i128, v: i128) -> f64 {
    let r = u.rem_euclid(2 * v);
    let r = if r > v { r - 2 * v } else { r };
    r as f64 / v as f64
}

fn sin_pi_reduced(r: f64) -> f64 {
    (PI * r).sin()
}

/// `e^{−πi r}` for an already reduced `r`.
fn cis_neg_pi_reduced(r: f64) -> Complex64 {
    let (s, c) = (PI * r).sin_cos();
    Complex64::new(c, -s)
}

/// `e^{−2πi t}` with the argument reduced modulo 1.
pub fn cis_neg_2pi(t: f64) -> Complex64 {
    cis_neg_pi_reduced(reduce_mod2(2.0 * t))
}

/// `sin(s)/s`, series near zero.
fn sinc(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        let s2 = s * s;
        1.0 - s2 / 6.0 + s2 * s2 / 120.0
    } else {
        s.sin() / s
    }
}

/// Cached evaluator for `χ̂_Ω` and `g`.
#[derive(Clone, Debug)]
pub struct FourierEvaluator {
    omega: IntervalUnion,
    lefts: Vec<f64>,
    rights: Vec<f64>,
    widths: Vec<f64>,
    sums: Vec<f64>,
    measure: f64,
    exact: Option<(i64, Vec<i64>, Vec<i64>)>,
}

impl FourierEvaluator {
    pub fn new(omega: &IntervalUnion) -> Self {
        let lefts = omega.lefts_f64();
        let rights = omega.rights_f64();
        let exact = omega.scaled_endpoints();
        let (widths, sums) = match &exact {
            Some((n, al, be)) => (
                al.iter().zip(be).map(|(a, b)| (b - a) as f64 / *n as f64).collect(),
                al.iter().zip(be).map(|(a, b)| (a + b) as f64 / *n as f64).collect(),
            ),
            None => (
                lefts.iter().zip(&rights).map(|(a, b)| b - a).collect(),
                lefts.iter().zip(&rights).map(|(a, b)| a + b).collect(),
            ),
        };
        FourierEvaluator {
            omega: omega.clone(),
            lefts,
            rights,
            widths,
            sums,
            measure: omega.measure_f64(),
            exact,
        }
    }

    pub fn omega(&self) -> &IntervalUnion {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.lefts.len()
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn lefts(&self) -> &[f64] {
        &self.lefts
    }

    pub fn rights(&self) -> &[f64] {
        &self.rights
    }

    /// `g(ξ) = Σ_j e^{−2πi a_j ξ} − e^{−2πi b_j ξ}`.
    pub fn g(&self, xi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, s) in self.widths.iter().zip(&self.sums) {
            let amp = 2.0 * sin_pi_reduced(reduce_mod2(w * xi));
            acc += Complex64::new(0.0, amp) * cis_neg_pi_reduced(reduce_mod2(s * xi));
        }
        acc
    }

    /// `χ̂_Ω(ξ)`; equals `measure(Ω)` exactly at `ξ = 0`.
    pub fn chi_hat(&self, xi: f64) -> Complex64 {
        if xi == 0.0 {
            return Complex64::new(self.measure, 0.0);
        }
        if xi.abs() < SMALL_XI {
            return self.chi_hat_series(xi);
        }
        self.g(xi) / Complex64::new(0.0, 2.0 * PI * xi)
    }

    /// `Σ_j w_j · sinc(π w_j ξ) · e^{−πi s_j ξ}`: the removable-singularity form.
    pub fn chi_hat_series(&self, xi: f64) -> Complex64 {
        self.widths
            .iter()
            .zip(&self.sums)
            .map(|(w, s)| w * sinc(PI * w * xi) * cis_neg_pi_reduced(reduce_mod2(s * xi)))
            .sum()
    }

    /// `g` at a rational point with exact argument reduction (exact path);
    /// falls back to [`FourierEvaluator::g`] otherwise.
    pub fn g_at(&self, xi: &Real) -> Complex64 {
        match (&self.exact, xi) {
            (Some((n, al, be)), Real::Exact(q)) => {
                let (p, d) = (*q.numer() as i128, *q.denom() as i128);
                let v = *n as i128 * d;
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, b) in al.iter().zip(be) {
                    let w = reduce_mod2_rational((b - a) as i128 * p, v);
                    let s = reduce_mod2_rational((a + b) as i128 * p, v);
                    acc += Complex64::new(0.0, 2.0 * sin_pi_reduced(w)) * cis_neg_pi_reduced(s);
                }
                acc
            }
            _ => self.g(xi.to_f64()),
        }
    }

    /// Exact test of `g(p/q) = 0`: with `a_j = α_j/N` every exponential is a
    /// power of `ζ_{Nq}`.
    pub fn g_vanishes_exact(&self, xi: Rational) -> Result<bool> {
        let (n, al, be) = self
            .exact
            .as_ref()
            .ok_or_else(|| Error::NotRational("interval union has float endpoints".into()))?;
        let (p, q) = (*xi.numer() as i128, *xi.denom() as i128);
        let m = *n as i128 * q;
        if m > crate::cyclotomic::MAX_ORDER as i128 {
            return Err(Error::Overflow);
        }
        let exp = |e: i64| (-(e as i128) * p).rem_euclid(m) as i64;
        let mut terms = Vec::with_capacity(2 * al.len());
        for (a, b) in al.iter().zip(be) {
            terms.push((1, exp(*a)));
            terms.push((-1, exp(*b)));
        }
        crate::cyclotomic::root_of_unity_sum_vanishes(&terms, m as u64)
    }

    /// `χ̂_Ω` at a possibly exact point.
    pub fn chi_hat_at(&self, xi: &Real) -> Complex64 {
        let x = xi.to_f64();
        if xi.is_zero() {
            return Complex64::new(self.measure, 0.0);
        }
        if x.abs() < SMALL_XI {
            return self.chi_hat_series(x);
        }
        self.g_at(xi) / Complex64::new(0.0, 2.0 * PI * x)
    }

    /// `g′(ξ) = 2πi Σ_j (b_j e^{−2πi b_j ξ} − a_j e^{−2πi a_j ξ})`.
    pub fn g_derivative(&self, xi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.lefts.iter().zip(&self.rights) {
            acc += *b * cis_neg_2pi(b * xi) - *a * cis_neg_2pi(a * xi);
        }
        acc * Complex64::new(0.0, 2.0 * PI)
    }

    /// `2π Σ_j (|a_j| + |b_j|)`, a bound on `|g′|` over the real line.
    pub fn derivative_bound(&self) -> f64 {
        2.0 * PI
            * self
                .lefts
                .iter()
                .zip(&self.rights)
                .map(|(a, b)| a.abs() + b.abs())
                .sum::<f64>()
    }

    /// `4π² Σ_j (a_j² + b_j²)`, a bound on `|g″|`.
    pub fn second_derivative_bound(&self) -> f64 {
        4.0 * PI
            * PI
            * self
                .lefts
                .iter()
                .zip(&self.rights)
                .map(|(a, b)| a * a + b * b)
                .sum::<f64>()
    }

    /// Bound on the floating-point error of [`FourierEvaluator::g`] at `ξ`.
    pub fn g_rounding_bound(&self, xi: f64) -> f64 {
        let eps = f64::EPSILON;
        self.widths
            .iter()
            .zip(&self.sums)
            .map(|(w, s)| 16.0 * eps * (1.0 + PI * (w.abs() + s.abs()) * xi.abs()))
            .sum()
    }
}

/// `g(ξ)` for `Ω`.
pub fn eval_g(omega: &IntervalUnion, xi: f64) -> Complex64 {
    FourierEvaluator::new(omega).g(xi)
}

/// `χ̂_Ω(ξ)`.
pub fn eval_chi_hat(omega: &IntervalUnion, xi: f64) -> Complex64 {
    FourierEvaluator::new(omega).chi_hat(xi)
}

// Gauss–Kronrod 7/15 nodes and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64) -> (Complex64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// `∫_Ω e^{−2πiξx} dx` by adaptive Gauss–Kronrod quadrature, independent of
/// the closed form. Used as a test oracle.
pub fn quadrature_oracle(omega: &IntervalUnion, xi: f64, tol: f64) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("quadrature tolerance must be positive".into()));
    }
    const MAX_SEGMENTS: usize = 200_000;
    let f = |x: f64| cis_neg_2pi(xi * x);
    let total = omega.measure_f64();
    let mut stack: Vec<(f64, f64)> = omega
        .intervals()
        .iter()
        .map(|iv| (iv.left.to_f64(), iv.right.to_f64()))
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut segments = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        segments += 1;
        if segments > MAX_SEGMENTS {
            return Err(Error::BudgetExceeded(format!(
                "quadrature did not reach tolerance {tol:e} within {MAX_SEGMENTS} segments"
            )));
        }
        let (val, err) = gk15(&f, lo, hi);
        let share = tol * (hi - lo) / total;
        if err <= share || hi - lo < 1e-14 * total {
            sum += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    Ok(sum)
}

/// Explicit tail constant: for every set `A` with minimum gap `δ` and every
/// radius `R' ≥ min_radius`,
/// `Σ_{a∈A, |a|>R'} |χ̂_Ω(a)|² ≤ constant / R'`.
///
/// From `|g| ≤ 2n` we get `|χ̂_Ω(y)| ≤ n / (π|y|)`. Points of `A` beyond `R`
/// on one side satisfy `a_k ≥ R + (k−1)δ`, so
/// `Σ 1/a_k² ≤ 1/R² + ∫_0^∞ dt/(R + tδ)² = 1/R² + 1/(δR)`. Doubling for both
/// sides gives `constant = 2n²(1/δ + 1/R₀)/π²` with `R₀ = min_radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub constant: f64,
    pub min_gap: f64,
    pub min_radius: f64,
    pub radius: f64,
}

impl TailBound {
    /// `C / R` at the radius the bound was built for.
    pub fn value(&self) -> f64 {
        self.constant / self.radius
    }

    /// `C / r` for any `r ≥ min_radius`.
    pub fn at(&self, r: f64) -> Result<f64> {
        if r < self.min_radius {
            return Err(Error::InvalidParameter(format!(
                "tail bound built for R >= {} queried at {r}",
                self.min_radius
            )));
        }
        Ok(self.constant / r)
    }
}

pub fn tail_sum_bound(omega: &IntervalUnion, delta: f64, radius: f64) -> Result<TailBound> {
    if !(delta > 0.0) || !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tail bound needs positive gap and radius, got delta={delta}, R={radius}"
        )));
    }
    let n = omega.n() as f64;
    let constant = 2.0 * n * n * (1.0 / delta + 1.0 / radius) / (PI * PI);
    Ok(TailBound {
        constant,
        min_gap: delta,
        min_radius: radius,
        radius,
    })
}
