//! Finite unions of open intervals.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{Rational, Real};

/// An open interval `(left, right)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub left: Real,
    pub right: Real,
}

impl Interval {
    pub fn length(&self) -> Real {
        self.right - self.left
    }
}

/// `Ω = ⋃ (a_j, b_j)` in canonical form: sorted, pairwise disjoint, with
/// overlapping or abutting pieces merged. Either every endpoint is exact or
/// every endpoint is a float.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
    denominator: Option<i64>,
}

impl IntervalUnion {
    /// Builds the canonical form of a list of `(left, right)` pairs.
    pub fn normalize(raw: &[(Real, Real)]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        let exact = raw[0].0.is_exact();
        for (l, r) in raw {
            if l.is_exact() != exact || r.is_exact() != exact {
                return Err(Error::MixedRepresentation);
            }
            if !l.to_f64().is_finite() || !r.to_f64().is_finite() {
                return Err(Error::InvalidParameter("non-finite endpoint".into()));
            }
            if l >= r {
                return Err(Error::DegenerateInterval {
                    left: l.to_string(),
                    right: r.to_string(),
                });
            }
        }
        let mut sorted: Vec<Interval> = raw
            .iter()
            .map(|&(left, right)| Interval { left, right })
            .collect();
        sorted.sort_by(|a, b| a.left.total_cmp(&b.left).then(a.right.total_cmp(&b.right)));

        let mut merged: Vec<Interval> = Vec::with_capacity(sorted.len());
        for iv in sorted {
            match merged.last_mut() {
                Some(last) if iv.left <= last.right => {
                    if iv.right > last.right {
                        last.right = iv.right;
                    }
                }
                _ => merged.push(iv),
            }
        }

        let denominator = if exact {
            let mut n: i64 = 1;
            for iv in &merged {
                for e in [iv.left, iv.right] {
                    let r = e.as_rational().expect("exact endpoint");
                    n = n.lcm(r.denom());
                }
            }
            Some(n)
        } else {
            None
        };
        Ok(IntervalUnion {
            intervals: merged,
            denominator,
        })
    }

    pub fn from_rationals(pairs: &[(Rational, Rational)]) -> Result<Self> {
        let raw: Vec<(Real, Real)> = pairs
            .iter()
            .map(|&(l, r)| (Real::Exact(l), Real::Exact(r)))
            .collect();
        Self::normalize(&raw)
    }

    pub fn from_floats(pairs: &[(f64, f64)]) -> Result<Self> {
        let raw: Vec<(Real, Real)> = pairs
            .iter()
            .map(|&(l, r)| (Real::Float(l), Real::Float(r)))
            .collect();
        Self::normalize(&raw)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Number of intervals `n`; the φ-map lands in dimension `2n`.
    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_exact(&self) -> bool {
        self.denominator.is_some()
    }

    /// Least common denominator `N` of all endpoints (exact path only).
    pub fn denominator(&self) -> Option<i64> {
        self.denominator
    }

    /// Integer numerators `(N, α, β)` with `a_j = α_j / N`, `b_j = β_j / N`.
    pub fn scaled_endpoints(&self) -> Option<(i64, Vec<i64>, Vec<i64>)> {
        let n = self.denominator?;
        let scale = |e: Real| {
            let r = e.as_rational().expect("exact endpoint");
            r.numer() * (n / r.denom())
        };
        let alphas = self.intervals.iter().map(|iv| scale(iv.left)).collect();
        let betas = self.intervals.iter().map(|iv| scale(iv.right)).collect();
        Some((n, alphas, betas))
    }

    pub fn lefts_f64(&self) -> Vec<f64> {
        self.intervals.iter().map(|iv| iv.left.to_f64()).collect()
    }

    pub fn rights_f64(&self) -> Vec<f64> {
        self.intervals.iter().map(|iv| iv.right.to_f64()).collect()
    }

    /// `Σ (b_j − a_j)`; exact on the exact path.
    pub fn measure(&self) -> Real {
        self.intervals
            .iter()
            .map(Interval::length)
            .fold(Real::Exact(Rational::from_integer(0)), |acc, l| acc + l)
            .promote(self.is_exact())
    }

    pub fn measure_f64(&self) -> f64 {
        self.measure().to_f64()
    }

    /// `χ_Ω(x)`; intervals are open, so endpoints map to 0.
    pub fn indicator(&self, x: f64) -> u8 {
        self.intervals
            .iter()
            .any(|iv| iv.left.to_f64() < x && x < iv.right.to_f64()) as u8
    }

    /// Exact indicator for a rational point (exact path only).
    pub fn indicator_exact(&self, x: Rational) -> Option<u8> {
        if !self.is_exact() {
            return None;
        }
        let x = Real::Exact(x);
        Some(self.intervals.iter().any(|iv| iv.left < x && x < iv.right) as u8)
    }

    pub fn hull(&self) -> (Real, Real) {
        (
            self.intervals[0].left,
            self.intervals[self.intervals.len() - 1].right,
        )
    }

    pub fn max_abs_endpoint(&self) -> f64 {
        self.intervals
            .iter()
            .flat_map(|iv| [iv.left.to_f64().abs(), iv.right.to_f64().abs()])
            .fold(0.0, f64::max)
    }

    /// Centroid `∫_Ω t dt / |Ω|`.
    pub fn centroid(&self) -> f64 {
        let first: f64 = self
            .intervals
            .iter()
            .map(|iv| {
                let (a, b) = (iv.left.to_f64(), iv.right.to_f64());
                (b * b - a * a) / 2.0
            })
            .sum();
        first / self.measure_f64()
    }

    /// `∫_Ω (t − c)² dt` about the point `c`.
    pub fn second_moment_about(&self, c: f64) -> f64 {
        self.intervals
            .iter()
            .map(|iv| {
                let (a, b) = (iv.left.to_f64() - c, iv.right.to_f64() - c);
                (b.powi(3) - a.powi(3)) / 3.0
            })
            .sum()
    }

    /// The same set shifted by `s` (float path).
    pub fn translated_f64(&self, s: f64) -> IntervalUnion {
        let pairs: Vec<(f64, f64)> = self
            .intervals
            .iter()
            .map(|iv| (iv.left.to_f64() + s, iv.right.to_f64() + s))
            .collect();
        IntervalUnion::from_floats(&pairs).expect("translation preserves validity")
    }

    /// Raw endpoint pairs, suitable for re-normalization.
    pub fn pairs(&self) -> Vec<(Real, Real)> {
        self.intervals.iter().map(|iv| (iv.left, iv.right)).collect()
    }
}

trait Promote {
    fn promote(self, exact: bool) -> Real;
}

impl Promote for Real {
    fn promote(self, exact: bool) -> Real {
        if exact {
            self
        } else {
            Real::Float(self.to_f64())
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Real {
        Real::exact(n, d)
    }

    #[test]
    fn already_canonical() {
        let u = IntervalUnion::normalize(&[(q(0, 1), q(1, 2)), (q(1, 1), q(3, 2))]).unwrap();
        assert_eq!(u.n(), 2);
        assert_eq!(u.measure(), Real::int(1));
        assert_eq!(u.denominator(), Some(2));
    }

    #[test]
    fn overlap_merges() {
        let u = IntervalUnion::normalize(&[(q(0, 1), q(1, 2)), (q(1, 4), q(3, 4))]).unwrap();
        assert_eq!(u.n(), 1);
        assert_eq!(u.intervals()[0].left, q(0, 1));
        assert_eq!(u.intervals()[0].right, q(3, 4));
    }

    #[test]
    fn abutting_merges() {
        let u = IntervalUnion::normalize(&[(q(0, 1), q(1, 2)), (q(1, 2), q(1, 1))]).unwrap();
        assert_eq!(u.n(), 1);
        assert_eq!(u.measure(), Real::int(1));
    }

    #[test]
    fn sorts() {
        let u = IntervalUnion::normalize(&[(q(1, 1), q(3, 2)), (q(0, 1), q(1, 2))]).unwrap();
        assert_eq!(u.intervals()[0].left, q(0, 1));
        assert_eq!(u.intervals()[1].left, q(1, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(IntervalUnion::normalize(&[]), Err(Error::EmptyInput));
        assert!(matches!(
            IntervalUnion::normalize(&[(q(1, 1), q(1, 1))]),
            Err(Error::DegenerateInterval { .. })
        ));
        assert_eq!(
            IntervalUnion::normalize(&[(q(0, 1), Real::float(1.0))]),
            Err(Error::MixedRepresentation)
        );
    }

    #[test]
    fn measures() {
        let unit = IntervalUnion::normalize(&[(q(-1, 2), q(1, 2))]).unwrap();
        assert_eq!(unit.measure(), Real::int(1));
        assert!(unit.measure().is_exact());
        let quarter = IntervalUnion::normalize(&[(q(0, 1), q(1, 4))]).unwrap();
        assert_eq!(quarter.measure(), q(1, 4));
        let fl = IntervalUnion::from_floats(&[(0.0, 0.25)]).unwrap();
        assert!(!fl.measure().is_exact());
    }

    #[test]
    fn indicator_open_boundary() {
        let unit = IntervalUnion::normalize(&[(q(-1, 2), q(1, 2))]).unwrap();
        assert_eq!(unit.indicator(0.0), 1);
        assert_eq!(unit.indicator(0.5), 0);
        assert_eq!(unit.indicator_exact(Rational::new(1, 2)), Some(0));
        let two = IntervalUnion::normalize(&[(q(0, 1), q(1, 2)), (q(1, 1), q(3, 2))]).unwrap();
        assert_eq!(two.indicator(0.75), 0);
        assert_eq!(two.indicator(1.25), 1);
    }

    #[test]
    fn scaled_numerators() {
        let two = IntervalUnion::normalize(&[(q(0, 1), q(1, 2)), (q(1, 1), q(3, 2))]).unwrap();
        let (n, a, b) = two.scaled_endpoints().unwrap();
        assert_eq!(n, 2);
        assert_eq!(a, vec![0, 2]);
        assert_eq!(b, vec![1, 3]);
    }

    #[test]
    fn moments() {
        let unit = IntervalUnion::from_floats(&[(-0.5, 0.5)]).unwrap();
        assert!(unit.centroid().abs() < 1e-15);
        assert!((unit.second_moment_about(0.0) - 1.0 / 12.0).abs() < 1e-15);
    }
}
