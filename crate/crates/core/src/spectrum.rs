//! Finite windows of a frequency set, periodic descriptions and
//! sliding-window fingerprints.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{Rational, Real};

/// Strictly increasing finite sample `λ_0 < λ_1 < … < λ_k` of a frequency set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumWindow {
    points: Vec<Real>,
}

impl SpectrumWindow {
    /// Sorts the points; rejects repeated points.
    pub fn new(mut points: Vec<Real>) -> Result<Self> {
        points.sort_by(Real::total_cmp);
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "spectrum window points must be distinct".into(),
            ));
        }
        Ok(SpectrumWindow { points })
    }

    pub fn empty() -> Self {
        SpectrumWindow { points: Vec::new() }
    }

    pub fn points(&self) -> &[Real] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.points.iter().all(Real::is_exact)
    }

    /// `(min, max)` of the window.
    pub fn span(&self) -> Option<(Real, Real)> {
        Some((*self.points.first()?, *self.points.last()?))
    }

    pub fn span_length(&self) -> f64 {
        self.span().map_or(0.0, |(a, b)| (b - a).to_f64())
    }

    pub fn min_gap(&self) -> Option<Real> {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(Real::total_cmp)
    }

    /// Consecutive differences `λ_{j+1} − λ_j`.
    pub fn gaps(&self) -> Result<Vec<Real>> {
        if self.points.len() < 2 {
            return Err(Error::InsufficientData(
                "gaps need at least two points".into(),
            ));
        }
        Ok(self.points.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// Index of `x` in the window, exact or within `tol`.
    pub fn index_of(&self, x: &Real, tol: f64) -> Option<usize> {
        let i = self.points.partition_point(|p| p.total_cmp(x).is_lt());
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .find(|&j| self.points.get(j).is_some_and(|p| p.approx_eq(x, tol)))
    }

    pub fn contains(&self, x: &Real, tol: f64) -> bool {
        self.index_of(x, tol).is_some()
    }

    /// Points in the closed range `[lo, hi]`.
    pub fn slice(&self, lo: &Real, hi: &Real) -> &[Real] {
        let a = self.points.partition_point(|p| p < lo);
        let b = self.points.partition_point(|p| p <= hi);
        &self.points[a..b.max(a)]
    }

    pub fn translate(&self, s: &Real) -> SpectrumWindow {
        SpectrumWindow {
            points: self.points.iter().map(|p| *p + *s).collect(),
        }
    }

    /// `(W ∩ [λ, λ+h]) − λ` for an anchor `λ ∈ W`, offsets snapped to a
    /// `tol` grid on the float path.
    pub fn fingerprint(&self, anchor: &Real, width: &Real, tol: f64) -> Result<WindowFingerprint> {
        if self.index_of(anchor, tol).is_none() {
            return Err(Error::InvalidParameter(format!(
                "anchor {anchor} is not a point of the window"
            )));
        }
        let (_, max) = self.span().expect("non-empty");
        let end = *anchor + *width;
        let exact = anchor.is_exact() && width.is_exact() && max.is_exact();
        let beyond = if exact {
            end > max
        } else {
            end.to_f64() > max.to_f64() + tol
        };
        if beyond {
            return Err(Error::InsufficientData(format!(
                "window [{anchor}, {end}] exceeds available data (max {max})"
            )));
        }
        let pool: &[Real] = if exact {
            self.slice(anchor, &end)
        } else {
            let lo = Real::Float(anchor.to_f64() - tol);
            let hi = Real::Float(end.to_f64() + tol);
            self.slice(&lo, &hi)
        };
        let offsets = pool.iter().map(|p| snap(*p - *anchor, tol)).collect();
        Ok(WindowFingerprint {
            anchor: *anchor,
            width: *width,
            offsets,
        })
    }

    /// `|W ∩ [x, x+T)|`; the range must lie inside the window's span.
    pub fn density_count(&self, x: &Real, period: &Real) -> Result<usize> {
        if !(period.to_f64() > 0.0) {
            return Err(Error::InvalidParameter("period must be positive".into()));
        }
        let (min, max) = self
            .span()
            .ok_or_else(|| Error::InsufficientData("empty window".into()))?;
        let end = *x + *period;
        if *x < min || end > max {
            return Err(Error::InsufficientData(format!(
                "[{x}, {end}) is not covered by the window [{min}, {max}]"
            )));
        }
        let a = self.points.partition_point(|p| p < x);
        let b = self.points.partition_point(|p| *p < end);
        Ok(b - a)
    }
}

fn snap(o: Real, tol: f64) -> Real {
    match o {
        Real::Exact(_) => o,
        Real::Float(v) if tol > 0.0 => {
            let s = (v / tol).round() * tol;
            Real::Float(if s == 0.0 { 0.0 } else { s })
        }
        Real::Float(_) => o,
    }
}

/// `Λ = base + Tℤ` with `base ⊂ [0, T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSpectrum {
    base: Vec<Real>,
    period: Real,
}

impl PeriodicSpectrum {
    pub fn new(mut base: Vec<Real>, period: Real) -> Result<Self> {
        if !(period.to_f64() > 0.0) {
            return Err(Error::InvalidParameter("period must be positive".into()));
        }
        if base.is_empty() {
            return Err(Error::InvalidParameter("periodic base is empty".into()));
        }
        let zero = Real::Exact(Rational::zero());
        if base.iter().any(|b| *b < zero || *b >= period) {
            return Err(Error::InvalidParameter(format!(
                "base points must lie in [0, {period})"
            )));
        }
        base.sort_by(Real::total_cmp);
        if base.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("base points must be distinct".into()));
        }
        Ok(PeriodicSpectrum { base, period })
    }

    /// Reduces arbitrary points modulo `period` into a base.
    pub fn from_points_mod(points: &[Real], period: Real) -> Result<Self> {
        let base = points.iter().map(|p| reduce_mod(*p, period)).collect();
        Self::new(base, period)
    }

    pub fn base(&self) -> &[Real] {
        &self.base
    }

    pub fn period(&self) -> Real {
        self.period
    }

    pub fn is_exact(&self) -> bool {
        self.period.is_exact() && self.base.iter().all(Real::is_exact)
    }

    /// `|base| / T`.
    pub fn density(&self) -> f64 {
        self.base.len() as f64 / self.period.to_f64()
    }

    /// Minimum gap of `base + Tℤ`, wrap-around included.
    pub fn min_gap(&self) -> Real {
        let wrap = self.base[0] + self.period - self.base[self.base.len() - 1];
        self.base
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(std::iter::once(wrap))
            .min_by(Real::total_cmp)
            .expect("non-empty base")
    }

    /// All points of `base + Tℤ` in `[lo, hi]`, sorted.
    pub fn unroll(&self, lo: &Real, hi: &Real) -> SpectrumWindow {
        if hi < lo {
            return SpectrumWindow::empty();
        }
        let t = self.period.to_f64();
        let kmin = ((lo.to_f64() - t) / t).floor() as i64;
        let kmax = (hi.to_f64() / t).ceil() as i64;
        let mut pts = Vec::new();
        for k in kmin..=kmax {
            let shift = self.period * Real::int(k);
            for b in &self.base {
                let p = *b + shift;
                if p >= *lo && p <= *hi {
                    pts.push(p);
                }
            }
        }
        SpectrumWindow::new(pts).expect("distinct by construction")
    }

    /// The same set translated by `s`, re-reduced into `[0, T)`.
    pub fn translate(&self, s: &Real) -> PeriodicSpectrum {
        let pts: Vec<Real> = self.base.iter().map(|b| *b + *s).collect();
        Self::from_points_mod(&pts, self.period).expect("translation keeps validity")
    }
}

/// `x mod T` into `[0, T)`.
pub fn reduce_mod(x: Real, period: Real) -> Real {
    match (x, period) {
        (Real::Exact(a), Real::Exact(t)) => {
            let k = (a / t).floor();
            Real::Exact(a - k * t)
        }
        _ => {
            let (a, t) = (x.to_f64(), period.to_f64());
            let r = a.rem_euclid(t);
            Real::Float(if r >= t { 0.0 } else { r })
        }
    }
}

/// `(Λ ∩ [λ, λ+h]) − λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowFingerprint {
    pub anchor: Real,
    pub width: Real,
    pub offsets: Vec<Real>,
}

impl WindowFingerprint {
    /// Same offsets, exactly on the exact path or within `tol`.
    pub fn matches(&self, other: &WindowFingerprint, tol: f64) -> bool {
        self.offsets.len() == other.offsets.len()
            && self
                .offsets
                .iter()
                .zip(&other.offsets)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}
