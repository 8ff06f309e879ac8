//! JSON file formats.
//!
//! `Ω`: `{"intervals": [[left, right], ...]}`.
//! `Λ`: `{"points": [...]}` or `{"base": [...], "period": T}`.
//! Numbers are `[numerator, denominator]`, integers, `"p/q"` strings (exact)
//! or decimal strings / JSON floats. One float endpoint moves the whole
//! interval union to the float path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::real::Real;
use crate::spectrum::{PeriodicSpectrum, SpectrumWindow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaFile {
    pub intervals: Vec<[Real; 2]>,
}

impl OmegaFile {
    pub fn to_union(&self) -> Result<IntervalUnion> {
        let exact = self.intervals.iter().flatten().all(Real::is_exact);
        let raw: Vec<(Real, Real)> = self
            .intervals
            .iter()
            .map(|[l, r]| {
                if exact {
                    (*l, *r)
                } else {
                    (Real::Float(l.to_f64()), Real::Float(r.to_f64()))
                }
            })
            .collect();
        IntervalUnion::normalize(&raw)
    }

    pub fn from_union(omega: &IntervalUnion) -> Self {
        OmegaFile {
            intervals: omega.pairs().into_iter().map(|(l, r)| [l, r]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum LambdaFile {
    Points { points: Vec<Real> },
    Periodic { base: Vec<Real>, period: Real },
}

/// A parsed `Λ`: a finite window or a periodic set.
#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    Window(SpectrumWindow),
    Periodic(PeriodicSpectrum),
}

impl LambdaFile {
    pub fn to_lambda(&self) -> Result<Lambda> {
        match self {
            LambdaFile::Points { points } => SpectrumWindow::new(points.clone()).map(Lambda::Window),
            LambdaFile::Periodic { base, period } => {
                PeriodicSpectrum::new(base.clone(), *period).map(Lambda::Periodic)
            }
        }
    }
}

pub fn parse_omega(text: &str) -> Result<IntervalUnion> {
    serde_json::from_str::<OmegaFile>(text)
        .map_err(|e| Error::Format(format!("interval file: {e}")))?
        .to_union()
}

pub fn parse_lambda(text: &str) -> Result<Lambda> {
    serde_json::from_str::<LambdaFile>(text)
        .map_err(|e| Error::Format(format!("spectrum file: {e}")))?
        .to_lambda()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_forms() {
        let u = parse_omega(r#"{"intervals": [[[-1,2],[1,2]]]}"#).unwrap();
        assert!(u.is_exact());
        assert_eq!(u.measure(), Real::int(1));
        let u = parse_omega(r#"{"intervals": [[0, "1/2"], [1, "3/2"]]}"#).unwrap();
        assert_eq!(u.denominator(), Some(2));
        let u = parse_omega(r#"{"intervals": [[0, "0.25"]]}"#).unwrap();
        assert!(!u.is_exact());
        assert!((u.measure_f64() - 0.25).abs() < 1e-15);
        assert!(matches!(parse_omega(r#"{"intervals": []}"#), Err(Error::EmptyInput)));
        assert!(matches!(parse_omega(r#"{"interval": []}"#), Err(Error::Format(_))));
    }

    #[test]
    fn lambda_forms() {
        match parse_lambda(r#"{"points": [0, 1, [5,2]]}"#).unwrap() {
            Lambda::Window(w) => assert_eq!(w.len(), 3),
            other => panic!("{other:?}"),
        }
        match parse_lambda(r#"{"base": [0, [1,2]], "period": 2}"#).unwrap() {
            Lambda::Periodic(p) => assert_eq!(p.base().len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_lambda(r#"{"base": [3], "period": 2}"#).is_err());
    }

    #[test]
    fn periodic_round_trip() {
        let p = PeriodicSpectrum::new(vec![Real::int(0), Real::exact(1, 2)], Real::int(2)).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(parse_lambda(&text).unwrap(), Lambda::Periodic(p));
    }
}
