//! The map `φ(x) = (e^{−2πi a_j x}, e^{−2πi b_j x})_j ∈ ℂ^{2n}` and the form
//! `A(z, w) = ⟨z₁, w₁⟩ − ⟨z₂, w₂⟩`, for which `A(φ(λ), φ(μ)) = g(λ − μ)`.
//!
//! Orthogonality of `Λ` is `A`-orthogonality of `φ(Λ)`. If `B ⊆ Λ` spans
//! `V(Λ) = span φ(Λ)`, then `x ∈ Λ` iff `A(φ(x), φ(b)) = 0` for all `b ∈ B`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::cyclotomic::exact_rank;
use crate::error::{Error, Result};
use crate::fourier::{cis_neg_2pi, FourierEvaluator};
use crate::interval::IntervalUnion;
use crate::real::Real;
use crate::spectrum::SpectrumWindow;

/// Default relative singular-value threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

// Largest root-of-unity order handled by exact elimination.
const EXACT_RANK_MAX_ORDER: i64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiVector {
    pub x: Real,
    pub coords: Vec<Complex64>,
}

/// `exponents[k]` with `φ(x)_k = ζ_m^{exponents[k]}`, when `x` and `Ω` are rational.
fn phi_exponents(omega: &IntervalUnion, x: &Real, m: i64) -> Option<Vec<i64>> {
    let (n, al, be) = omega.scaled_endpoints()?;
    let q = x.as_rational()?;
    let scale = m / (n * q.denom());
    Some(
        al.iter()
            .chain(&be)
            .map(|e| (-(*e as i128) * *q.numer() as i128 * scale as i128).rem_euclid(m as i128) as i64)
            .collect(),
    )
}

pub fn phi(omega: &IntervalUnion, x: &Real) -> PhiVector {
    let coords = match (omega.scaled_endpoints(), x) {
        (Some((n, al, be)), Real::Exact(q)) => {
            let m = n as i128 * *q.denom() as i128;
            al.iter()
                .chain(&be)
                .map(|e| {
                    let r = (*e as i128 * *q.numer() as i128).rem_euclid(m);
                    cis_neg_2pi(r as f64 / m as f64)
                })
                .collect()
        }
        _ => {
            let x = x.to_f64();
            omega
                .lefts_f64()
                .iter()
                .chain(&omega.rights_f64())
                .map(|a| cis_neg_2pi(a * x))
                .collect()
        }
    };
    PhiVector { x: *x, coords }
}

/// `⟨z₁, w₁⟩ − ⟨z₂, w₂⟩` with `⟨u, v⟩ = Σ u_k conj(v_k)`.
pub fn form_a(z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch(z.len(), w.len()));
    }
    if !z.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "φ-vectors have even length, got {}",
            z.len()
        )));
    }
    let h = z.len() / 2;
    let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(u, v)| u * v.conj()).sum()
    };
    Ok(inner(&z[..h], &w[..h]) - inner(&z[h..], &w[h..]))
}

/// Points with their `φ`-vectors and rank data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiBasis {
    pub points: Vec<Real>,
    #[serde(skip)]
    pub vectors: Vec<PhiVector>,
    pub rank: usize,
    pub rank_tol: f64,
    /// Rank computed by exact elimination over `ℚ(ζ_m)`.
    pub exact: bool,
    pub singular_values: Vec<f64>,
    /// `true` once checked to span the `φ`-space of a reference window.
    pub generating: bool,
}

impl PhiBasis {
    /// Checks `B` against the reference window and records the outcome.
    pub fn generating_for(
        omega: &IntervalUnion,
        points: &[Real],
        reference: &SpectrumWindow,
        rank_tol: f64,
    ) -> Result<PhiBasis> {
        let mut basis = rank_of(omega, points, rank_tol)?;
        basis.generating = is_generating(omega, points, reference, rank_tol)?;
        Ok(basis)
    }
}

fn common_order(omega: &IntervalUnion, points: &[Real]) -> Option<i64> {
    let n = omega.denominator()?;
    let mut l: i64 = 1;
    for p in points {
        l = l.lcm(p.as_rational()?.denom());
        if n.checked_mul(l)? > EXACT_RANK_MAX_ORDER {
            return None;
        }
    }
    Some(n * l)
}

fn numeric_singular_values(omega: &IntervalUnion, points: &[Real]) -> Vec<f64> {
    let vecs: Vec<PhiVector> = points.iter().map(|p| phi(omega, p)).collect();
    let dim = 2 * omega.n();
    let m = DMatrix::from_fn(dim, points.len(), |i, j| vecs[j].coords[i]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank of the `2n × |B|` matrix of `φ`-vectors: exact elimination when
/// everything is rational, otherwise singular values above
/// `rank_tol · σ_max`.
pub fn rank_of(omega: &IntervalUnion, points: &[Real], rank_tol: f64) -> Result<PhiBasis> {
    if points.is_empty() {
        return Err(Error::InsufficientData("rank of an empty point set".into()));
    }
    if !(rank_tol > 0.0) {
        return Err(Error::InvalidParameter("rank tolerance must be positive".into()));
    }
    let vectors: Vec<PhiVector> = points.iter().map(|p| phi(omega, p)).collect();
    let sv = numeric_singular_values(omega, points);
    let exact = common_order(omega, points).and_then(|m| {
        let rows: Option<Vec<Vec<i64>>> = points.iter().map(|p| phi_exponents(omega, p, m)).collect();
        exact_rank(m as u64, &rows?).ok()
    });
    let rank = match exact {
        Some(r) => r,
        None => {
            let cut = rank_tol * sv.first().copied().unwrap_or(0.0);
            sv.iter().filter(|&&s| s > cut).count()
        }
    };
    Ok(PhiBasis {
        points: points.to_vec(),
        vectors,
        rank,
        rank_tol,
        exact: exact.is_some(),
        singular_values: sv,
        generating: false,
    })
}

/// `rank φ(B) = rank φ(W)` for `B ⊆ W`.
pub fn is_generating(
    omega: &IntervalUnion,
    points: &[Real],
    reference: &SpectrumWindow,
    rank_tol: f64,
) -> Result<bool> {
    if let Some(p) = points.iter().find(|p| !reference.contains(p, 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "basis point {p} is not in the reference window"
        )));
    }
    let b = rank_of(omega, points, rank_tol)?.rank;
    let w = rank_of(omega, reference.points(), rank_tol)?.rank;
    Ok(b == w)
}

/// Outcome of a membership query with the residuals `|A(φ(x), φ(b))|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub x: Real,
    pub member: bool,
    pub exact: bool,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// `x ∈ Λ` iff `A(φ(x), φ(b)) = 0` for every `b` of a generating basis.
pub fn membership_test(
    omega: &IntervalUnion,
    basis: &PhiBasis,
    x: &Real,
    tol: f64,
) -> Result<Membership> {
    if !basis.generating {
        return Err(Error::NotGenerating);
    }
    if basis.vectors.first().is_some_and(|v| v.coords.len() != 2 * omega.n()) {
        return Err(Error::DimensionMismatch(basis.vectors[0].coords.len(), 2 * omega.n()));
    }
    let px = phi(omega, x);
    let residuals: Vec<f64> = basis
        .vectors
        .iter()
        .map(|v| form_a(&px.coords, &v.coords).map(|a| a.norm()))
        .collect::<Result<_>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let ev = FourierEvaluator::new(omega);
    let exact_verdict: Option<bool> = basis
        .points
        .iter()
        .map(|b| match *x - *b {
            Real::Exact(d) if omega.is_exact() => {
                if d == num_rational::Ratio::from_integer(0) {
                    Some(true)
                } else {
                    ev.g_vanishes_exact(d).ok()
                }
            }
            _ => None,
        })
        .try_fold(true, |acc, v| v.map(|v| acc && v));
    let (member, exact) = match exact_verdict {
        Some(v) => (v, true),
        None => (max_residual <= tol, false),
    };
    Ok(Membership {
        x: *x,
        member,
        exact,
        residuals,
        max_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorStatus {
    Generating,
    NotGenerating,
    /// `[λ, λ + width]` runs past the window.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnchorVerdict {
    pub anchor: Real,
    pub status: AnchorStatus,
    pub rank: Option<usize>,
}

/// Smallest width `T_g` for which every fully covered window
/// `W ∩ [λ, λ + T_g]` has the rank of `W`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratingWindow {
    pub width: Real,
    pub window_rank: usize,
    pub anchors: Vec<AnchorVerdict>,
}

impl GeneratingWindow {
    /// The window `W ∩ [λ, λ + T_g]` at the first generating anchor.
    pub fn first_basis<'w>(&self, window: &'w SpectrumWindow) -> Option<&'w [Real]> {
        let a = self
            .anchors
            .iter()
            .find(|a| a.status == AnchorStatus::Generating)?;
        Some(window.slice(&a.anchor, &(a.anchor + self.width)))
    }
}

pub fn find_generating_window(
    omega: &IntervalUnion,
    window: &SpectrumWindow,
    rank_tol: f64,
) -> Result<GeneratingWindow> {
    let pts = window.points();
    if pts.is_empty() {
        return Err(Error::InsufficientData("empty window".into()));
    }
    let target = rank_of(omega, pts, rank_tol)?.rank;
    let max = pts[pts.len() - 1];
    let mut widths: Vec<Real> = Vec::new();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            widths.push(pts[j] - pts[i]);
        }
    }
    widths.sort_by(Real::total_cmp);
    widths.dedup_by(|a, b| a.approx_eq(b, 1e-12));
    for width in widths {
        let mut anchors = Vec::with_capacity(pts.len());
        let mut ok = true;
        let mut covered = 0usize;
        for a in pts {
            let end = *a + width;
            if end > max && !end.approx_eq(&max, 1e-12) {
                anchors.push(AnchorVerdict {
                    anchor: *a,
                    status: AnchorStatus::Unknown,
                    rank: None,
                });
                continue;
            }
            covered += 1;
            let rank = rank_of(omega, window.slice(a, &end), rank_tol)?.rank;
            let status = if rank == target {
                AnchorStatus::Generating
            } else {
                ok = false;
                AnchorStatus::NotGenerating
            };
            anchors.push(AnchorVerdict {
                anchor: *a,
                status,
                rank: Some(rank),
            });
            if !ok {
                break;
            }
        }
        if ok && covered > 0 {
            return Ok(GeneratingWindow {
                width,
                window_rank: target,
                anchors,
            });
        }
    }
    Err(Error::InsufficientData(
        "no window width up to the span is generating".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::PeriodicSpectrum;
    use approx::assert_abs_diff_eq;

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

    fn pair_window(hi: i64) -> SpectrumWindow {
        PeriodicSpectrum::new(vec![Real::int(0), Real::exact(1, 2)], Real::int(2))
            .unwrap()
            .unroll(&Real::int(0), &Real::int(hi))
    }

    #[test]
    fn phi_examples() {
        let v = phi(&unit(), &Real::int(0));
        assert_eq!(v.coords, vec![Complex64::new(1.0, 0.0); 2]);
        let v = phi(&unit(), &Real::int(1));
        for c in &v.coords {
            assert_abs_diff_eq!(c.re, -1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-15);
        }
        assert_eq!(phi(&two(), &Real::int(0)).coords.len(), 4);
    }

    #[test]
    fn form_examples() {
        let z = phi(&two(), &Real::float(0.37));
        assert_eq!(form_a(&z.coords, &z.coords).unwrap(), Complex64::new(0.0, 0.0));
        let a = form_a(&phi(&unit(), &Real::exact(1, 2)).coords, &phi(&unit(), &Real::int(0)).coords).unwrap();
        assert_abs_diff_eq!(a.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.im, 2.0, epsilon = 1e-15);
        let a = form_a(&phi(&unit(), &Real::int(1)).coords, &phi(&unit(), &Real::int(0)).coords).unwrap();
        assert!(a.norm() < 1e-15);
        assert!(form_a(&[Complex64::new(1.0, 0.0); 2], &[Complex64::new(1.0, 0.0); 4]).is_err());
    }

    #[test]
    fn rank_examples() {
        let b = rank_of(&unit(), &[Real::int(0), Real::int(1), Real::int(2)], 1e-9).unwrap();
        assert_eq!(b.rank, 1);
        assert!(b.exact);
        let b = rank_of(&unit(), &[Real::int(0), Real::exact(1, 2)], 1e-9).unwrap();
        assert_eq!(b.rank, 2);
        let b = rank_of(&unit(), &[Real::float(0.0), Real::float(0.5)], 1e-9).unwrap();
        assert_eq!(b.rank, 2);
        assert!(!b.exact);
        assert_eq!(rank_of(&two(), &[Real::float(0.3)], 1e-9).unwrap().rank, 1);
    }

    #[test]
    fn generating_examples() {
        assert!(is_generating(&unit(), &[Real::int(0)], &ints(-5, 5), 1e-9).unwrap());
        let mut pts: Vec<Real> = (0..=3).map(Real::int).collect();
        pts.extend((0..3).map(|k| Real::exact(2 * k + 1, 2)));
        let w = SpectrumWindow::new(pts).unwrap();
        assert!(!is_generating(&unit(), &[Real::int(0)], &w, 1e-9).unwrap());
        let w = pair_window(10);
        let b = w.slice(&Real::int(0), &Real::int(2)).to_vec();
        assert!(is_generating(&two(), &b, &w, 1e-9).unwrap());
    }

    #[test]
    fn membership_examples() {
        let basis = PhiBasis::generating_for(&unit(), &[Real::int(0)], &ints(-5, 5), 1e-9).unwrap();
        assert!(basis.generating);
        assert!(membership_test(&unit(), &basis, &Real::int(3), 1e-9).unwrap().member);
        let m = membership_test(&unit(), &basis, &Real::exact(1, 2), 1e-9).unwrap();
        assert!(!m.member);
        assert_abs_diff_eq!(m.max_residual, 2.0, epsilon = 1e-14);
        assert!(membership_test(&unit(), &basis, &Real::int(0), 1e-9).unwrap().member);
        let mut bad = basis.clone();
        bad.generating = false;
        assert_eq!(
            membership_test(&unit(), &bad, &Real::int(1), 1e-9),
            Err(Error::NotGenerating)
        );
    }

    #[test]
    fn generating_window_examples() {
        let g = find_generating_window(&unit(), &ints(-10, 10), 1e-9).unwrap();
        assert!(g.width <= Real::int(1));
        let g = find_generating_window(&two(), &pair_window(20), 1e-9).unwrap();
        assert!(g.width <= Real::int(2));
        assert_eq!(g.window_rank, 2);
        let g = find_generating_window(&two(), &ints(0, 0), 1e-9).unwrap();
        assert_eq!(g.window_rank, 1);
    }
}
