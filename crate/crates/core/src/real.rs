//! Scalars that are either exact rationals or doubles.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Ratio<i64>;

/// Formats a double with 17 significant digits (always round-trips).
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// A real number on either the exact-rational or the floating path.
///
/// Arithmetic between two exact values stays exact; any operation that
/// touches a float produces a float.
#[derive(Clone, Copy, Debug)]
pub enum Real {
    Exact(Rational),
    Float(f64),
}

impl Real {
    pub fn exact(numer: i64, denom: i64) -> Real {
        Real::Exact(Rational::new(numer, denom))
    }

    pub fn int(v: i64) -> Real {
        Real::Exact(Rational::from_integer(v))
    }

    pub fn float(v: f64) -> Real {
        Real::Float(v)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Float(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Real::Exact(r) => Some(*r),
            Real::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Float(v) => *v == 0.0,
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(r.abs()),
            Real::Float(v) => Real::Float(v.abs()),
        }
    }

    /// Total order; exact pairs compare exactly, anything else by `f64::total_cmp`.
    pub fn total_cmp(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    /// Equality up to `tol`, exact when both sides are exact.
    pub fn approx_eq(&self, other: &Real, tol: f64) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }

    /// Distance to the nearest integer; zero exactly for exact integers.
    pub fn distance_to_integer(&self) -> f64 {
        match self {
            Real::Exact(r) => {
                let frac = r.fract().abs();
                let f = frac.to_f64().unwrap_or(f64::NAN);
                f.min(1.0 - f)
            }
            Real::Float(v) => (v - v.round()).abs(),
        }
    }
}

impl From<Rational> for Real {
    fn from(r: Rational) -> Self {
        Real::Exact(r)
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real::Float(v)
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::int(v)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                match (self, rhs) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a $op b),
                    (a, b) => Real::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $trait<&'a Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                *self $op *rhs
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(-r),
            Real::Float(v) => Real::Float(-v),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Real::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Real::Float(v) => write!(f, "{}", fmt17(*v)),
        }
    }
}

/// Rationals serialize as `[numerator, denominator]`, floats as decimal strings.
impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Exact(r) => [*r.numer(), *r.denom()].serialize(serializer),
            Real::Float(v) => serializer.serialize_str(&fmt17(*v)),
        }
    }
}

struct RealVisitor;

impl<'de> Visitor<'de> for RealVisitor {
    type Value = Real;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("[numerator, denominator], an integer, or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
        Ok(Real::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
        i64::try_from(v)
            .map(Real::int)
            .map_err(|_| E::custom("integer out of range"))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
        if v.is_finite() {
            Ok(Real::Float(v))
        } else {
            Err(E::custom("non-finite number"))
        }
    }

    fn visit_str<E: de::Error>(self, s: &str) -> Result<Real, E> {
        parse_real(s).map_err(E::custom)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Real, A::Error> {
        let numer: i64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let denom: i64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<i64>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        if denom == 0 {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(Real::exact(numer, denom))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Real, D::Error> {
        deserializer.deserialize_any(RealVisitor)
    }
}

/// Parses `"p/q"` (exact) or a decimal literal (float).
pub fn parse_real(s: &str) -> Result<Real, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
        let q: i64 = q.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
        if q == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Real::exact(p, q));
    }
    let v: f64 = s.parse().map_err(|e| format!("bad decimal {s:?}: {e}"))?;
    if !v.is_finite() {
        return Err(format!("non-finite value {s:?}"));
    }
    Ok(Real::Float(v))
}
