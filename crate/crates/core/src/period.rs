//! Periods of a spectrum window from repeated sliding-window fingerprints.
//!
//! A spectrum of finite complexity shows finitely many patterns
//! `(Λ ∩ [λ, λ+h]) − λ`; when `h` is a generating width, two anchors with
//! equal patterns differ by a period of `Λ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::spectrum::{SpectrumWindow, WindowFingerprint};
use crate::verify::{Condition, Verdict, VerificationReport, Witness};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodCandidate {
    /// `T = anchors.0 − anchors.1 > 0`.
    pub value: Real,
    pub anchors: (Real, Real),
    pub width: Real,
}

/// Smallest positive difference between anchors whose width-`h`
/// fingerprints match, or `None` when all fingerprints are distinct.
pub fn detect_period(
    window: &SpectrumWindow,
    width: &Real,
    tol: f64,
) -> Result<Option<PeriodCandidate>> {
    if width.to_f64() < 0.0 {
        return Err(Error::InvalidParameter("fingerprint width must be nonnegative".into()));
    }
    let span = window.span_length();
    if window.len() < 2 || span < 2.0 * width.to_f64() {
        return Err(Error::InsufficientData(format!(
            "span {span} is shorter than twice the width {width}"
        )));
    }
    let prints: Vec<WindowFingerprint> = window
        .points()
        .iter()
        .map_while(|a| window.fingerprint(a, width, tol).ok())
        .collect();
    let mut best: Option<PeriodCandidate> = None;
    for (j, fj) in prints.iter().enumerate() {
        for fi in prints[..j].iter().rev() {
            if !fi.matches(fj, tol) {
                continue;
            }
            let t = fj.anchor - fi.anchor;
            if best.as_ref().is_none_or(|b| t < b.value) {
                best = Some(PeriodCandidate {
                    value: t,
                    anchors: (fj.anchor, fi.anchor),
                    width: *width,
                });
            }
            break;
        }
    }
    Ok(best)
}

/// Checks `W ∩ [min+T, max] = (W ∩ [min, max−T]) + T`. A pass certifies
/// periodicity on the window only. Also reports whether `T` is an integer
/// and the number of points per period, expected to be `T·|Ω|` when
/// `measure` is given.
pub fn verify_period(
    window: &SpectrumWindow,
    period: &Real,
    tol: f64,
    measure: Option<f64>,
) -> Result<VerificationReport> {
    if !(period.to_f64() > 0.0) {
        return Err(Error::InvalidParameter("period must be positive".into()));
    }
    let (min, max) = window
        .span()
        .ok_or_else(|| Error::InsufficientData("empty window".into()))?;
    if !((max - min).to_f64() > period.to_f64()) {
        return Err(Error::InsufficientData(format!(
            "span {} does not exceed the period {period}",
            (max - min).to_f64()
        )));
    }
    let mut report = VerificationReport {
        condition: Condition::Period,
        verdict: Verdict::Pass,
        witness: None,
        parameters: Default::default(),
        metrics: Default::default(),
        samples: Vec::new(),
    };
    let slack = Real::Float(tol);
    let exact = window.is_exact() && period.is_exact();
    let upper = if exact { max - *period } else { max - *period + slack };
    for p in window.slice(&min, &upper) {
        let q = *p + *period;
        if !window.contains(&q, tol) {
            report.verdict = Verdict::Fail;
            report.witness = Some(Witness::Missing { point: q, source: *p });
            break;
        }
    }
    if report.witness.is_none() {
        let lower = if exact { min + *period } else { min + *period - slack };
        for p in window.slice(&lower, &max) {
            let q = *p - *period;
            if !window.contains(&q, tol) {
                report.verdict = Verdict::Fail;
                report.witness = Some(Witness::Missing { point: q, source: *p });
                break;
            }
        }
    }
    let integer = period.distance_to_integer() <= if period.is_exact() { 0.0 } else { tol };
    let counts: Vec<usize> = window
        .points()
        .iter()
        .filter_map(|x| window.density_count(x, period).ok())
        .take(64)
        .collect();
    let count = counts.first().copied();
    let consistent = counts.windows(2).all(|w| w[0] == w[1]);
    let expected = measure.map(|m| (period.to_f64() * m).round() as usize);
    report.parameters.insert("period".into(), serde_json::json!(period));
    report.parameters.insert("tol".into(), serde_json::json!(tol));
    report.parameters.insert("points".into(), serde_json::json!(window.len()));
    let metrics = &mut report.metrics;
    metrics.insert("scope".into(), "window".into());
    metrics.insert("integer".into(), integer.into());
    metrics.insert("count_per_period".into(), serde_json::json!(count));
    metrics.insert("count_consistent".into(), consistent.into());
    metrics.insert("count_samples".into(), counts.len().into());
    if let Some(e) = expected {
        metrics.insert("expected_count".into(), e.into());
        metrics.insert(
            "count_matches_density".into(),
            (consistent && count == Some(e)).into(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::PeriodicSpectrum;

    fn ints(lo: i64, hi: i64) -> SpectrumWindow {
        SpectrumWindow::new((lo..=hi).map(Real::int).collect()).unwrap()
    }

    fn pairs(hi: i64) -> SpectrumWindow {
        PeriodicSpectrum::new(vec![Real::int(0), Real::exact(1, 2)], Real::int(2))
            .unwrap()
            .unroll(&Real::int(0), &Real::int(hi))
    }

    #[test]
    fn detect_examples() {
        let c = detect_period(&ints(0, 20), &Real::int(3), 1e-9).unwrap().unwrap();
        assert_eq!(c.value, Real::int(1));
        assert_eq!(c.anchors, (Real::int(1), Real::int(0)));
        let c = detect_period(&pairs(20), &Real::int(2), 1e-9).unwrap().unwrap();
        assert_eq!(c.value, Real::int(2));
        let w = SpectrumWindow::new(vec![Real::int(0), Real::int(1), Real::exact(5, 2)]).unwrap();
        assert_eq!(detect_period(&w, &Real::int(1), 1e-9).unwrap(), None);
        assert!(detect_period(&ints(0, 3), &Real::int(2), 1e-9).is_err());
    }

    #[test]
    fn verify_examples() {
        let r = verify_period(&ints(-10, 10), &Real::int(1), 1e-9, Some(1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.metrics["integer"], serde_json::json!(true));
        assert_eq!(r.metrics["count_per_period"], serde_json::json!(1));
        let r = verify_period(&pairs(20), &Real::int(2), 1e-9, Some(1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.metrics["count_per_period"], serde_json::json!(2));
        assert_eq!(r.metrics["count_matches_density"], serde_json::json!(true));
        let r = verify_period(&ints(-10, 10), &Real::exact(1, 2), 1e-9, None).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        match r.witness.unwrap() {
            Witness::Missing { point, source } => {
                assert_eq!(point - source, Real::exact(1, 2));
                assert!(!ints(-10, 10).contains(&point, 1e-9));
            }
            w => panic!("{w:?}"),
        }
        assert!(verify_period(&ints(0, 1), &Real::int(2), 1e-9, None).is_err());
    }

    #[test]
    fn float_windows() {
        let w = SpectrumWindow::new((0..30).map(|k| Real::float(k as f64 * 0.5 + 0.1)).collect()).unwrap();
        let c = detect_period(&w, &Real::float(1.0), 1e-9).unwrap().unwrap();
        assert!((c.value.to_f64() - 0.5).abs() < 1e-12);
        let r = verify_period(&w, &Real::float(0.5), 1e-9, None).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.metrics["integer"], serde_json::json!(false));
    }
}
