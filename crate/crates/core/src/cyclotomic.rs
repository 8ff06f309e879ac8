//! Exact arithmetic with sums of roots of unity.
//!
//! On the exact path every exponential `e^{2πi t}` with rational `t` is a
//! root of unity `ζ_m^e`. A sum `Σ c_k ζ_m^{e_k}` vanishes iff the cyclotomic
//! polynomial `Φ_m` divides `Q(x) = Σ c_k x^{e_k}`. Writing
//! `x^m − 1 = Φ_m · Ψ_m`, that is the case iff `Q · Ψ_m ≡ 0 (mod x^m − 1)`,
//! a cyclic convolution whose coefficients never grow beyond
//! `‖Q‖₁ · ‖Ψ_m‖_∞`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest order for which we build `Φ_m`; keeps the exact path at desk scale.
pub const MAX_ORDER: u64 = 1 << 20;

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Euler's totient.
pub fn totient(m: u64) -> u64 {
    factorize(m)
        .iter()
        .fold(m, |acc, &(p, _)| acc / p * (p - 1))
}

fn mul_by_binomial(p: &[i128], d: usize) -> Result<Vec<i128>> {
    // p · (x^d − 1)
    let mut out = vec![0i128; p.len() + d];
    for (i, &c) in p.iter().enumerate() {
        out[i + d] = out[i + d].checked_add(c).ok_or(Error::Overflow)?;
        out[i] = out[i].checked_sub(c).ok_or(Error::Overflow)?;
    }
    Ok(out)
}

fn div_by_binomial(p: &[i128], d: usize) -> Result<Vec<i128>> {
    // exact quotient p / (x^d − 1)
    let deg = p.len() - 1;
    let qlen = deg + 1 - d;
    let mut q = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let above = if i + d < qlen { q[i + d] } else { 0 };
        q[i] = p[i + d].checked_add(above).ok_or(Error::Overflow)?;
    }
    Ok(q)
}

fn compute_cyclotomic(m: u64) -> Result<Vec<i64>> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "cyclotomic order {m} outside 1..={MAX_ORDER}"
        )));
    }
    let factors = factorize(m);
    let primes: Vec<u64> = factors.iter().map(|&(p, _)| p).collect();
    let rad: u64 = primes.iter().product();
    // Φ_rad = ∏_{d | rad} (x^d − 1)^{μ(rad/d)}; subsets of primes enumerate d.
    let k = primes.len();
    let mut num = vec![1i128];
    let mut den: Vec<usize> = Vec::new();
    for mask in 0u32..(1 << k) {
        let d: u64 = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| primes[i])
            .product();
        let missing = k - mask.count_ones() as usize;
        if missing.is_multiple_of(2) {
            num = mul_by_binomial(&num, d as usize)?;
        } else {
            den.push(d as usize);
        }
    }
    if num[num.len() - 1] < 0 {
        num.iter_mut().for_each(|c| *c = -*c);
    }
    for d in den {
        num = div_by_binomial(&num, d)?;
    }
    if num[num.len() - 1] < 0 {
        num.iter_mut().for_each(|c| *c = -*c);
    }
    let stretch = (m / rad) as usize;
    let mut out = vec![0i64; (num.len() - 1) * stretch + 1];
    for (i, c) in num.into_iter().enumerate() {
        out[i * stretch] = i64::try_from(c).map_err(|_| Error::Overflow)?;
    }
    Ok(out)
}

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn psi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i128>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i128>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Result<Arc<Vec<i64>>> {
    if let Some(p) = phi_cache().lock().unwrap().get(&m) {
        return Ok(Arc::clone(p));
    }
    let p = Arc::new(compute_cyclotomic(m)?);
    phi_cache().lock().unwrap().insert(m, Arc::clone(&p));
    Ok(p)
}

/// `Ψ_m = (x^m − 1) / Φ_m`, lowest degree first.
fn cofactor(m: u64) -> Result<Arc<Vec<i128>>> {
    if let Some(p) = psi_cache().lock().unwrap().get(&m) {
        return Ok(Arc::clone(p));
    }
    let phi = cyclotomic_poly(m)?;
    let dphi = phi.len() - 1;
    let m_us = m as usize;
    let mut rem = vec![0i128; m_us + 1];
    rem[0] = -1;
    rem[m_us] = 1;
    let qlen = m_us - dphi + 1;
    let mut q = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dphi];
        q[i] = c;
        if c != 0 {
            for (j, &pc) in phi.iter().enumerate() {
                let t = c.checked_mul(pc as i128).ok_or(Error::Overflow)?;
                rem[i + j] = rem[i + j].checked_sub(t).ok_or(Error::Overflow)?;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    let q = Arc::new(q);
    psi_cache().lock().unwrap().insert(m, Arc::clone(&q));
    Ok(q)
}

/// Combines `Σ c ζ_m^e` into canonical `(exponent mod m) → coefficient` form
/// and lowers `m` by the gcd of all exponents.
fn reduce_terms(terms: &[(i64, i64)], m: u64) -> (u64, BTreeMap<u64, i64>) {
    let mut acc: BTreeMap<u64, i64> = BTreeMap::new();
    for &(c, e) in terms {
        let e = e.rem_euclid(m as i64) as u64;
        *acc.entry(e).or_insert(0) += c;
    }
    acc.retain(|_, c| *c != 0);
    let g = acc.keys().fold(m, |g, &e| g.gcd(&e));
    if g > 1 {
        let reduced = acc.into_iter().map(|(e, c)| (e / g, c)).collect();
        (m / g, reduced)
    } else {
        (m, acc)
    }
}

/// Exact test of `Σ_k c_k ζ_m^{e_k} = 0` where `ζ_m = e^{2πi/m}`.
pub fn root_of_unity_sum_vanishes(terms: &[(i64, i64)], m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidParameter("root-of-unity order 0".into()));
    }
    let (m, acc) = reduce_terms(terms, m);
    if acc.is_empty() {
        return Ok(true);
    }
    if m == 1 {
        return Ok(acc.values().sum::<i64>() == 0);
    }
    let psi = cofactor(m)?;
    let m_us = m as usize;
    for k in 0..m_us {
        let mut s: i128 = 0;
        for (&e, &c) in &acc {
            let idx = (k + m_us - e as usize) % m_us;
            if idx < psi.len() {
                s += c as i128 * psi[idx];
            }
        }
        if s != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Element of `ℤ[ζ_m]` stored as a polynomial of degree `< φ(m)`.
#[derive(Clone, Debug)]
struct CycloInt {
    coeffs: Vec<BigInt>,
}

struct CycloRing {
    phi: Vec<BigInt>,
    degree: usize,
    order: u64,
}

impl CycloRing {
    fn new(m: u64) -> Result<Self> {
        let phi: Vec<BigInt> = cyclotomic_poly(m)?.iter().map(|&c| BigInt::from(c)).collect();
        let degree = phi.len() - 1;
        Ok(CycloRing {
            phi,
            degree,
            order: m,
        })
    }

    fn reduce(&self, mut p: Vec<BigInt>) -> CycloInt {
        let d = self.degree;
        if p.len() > d {
            for i in (d..p.len()).rev() {
                if p[i].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut p[i]);
                for j in 0..d {
                    if !self.phi[j].is_zero() {
                        p[i - d + j] -= &c * &self.phi[j];
                    }
                }
            }
            p.truncate(d);
        }
        p.resize(d, BigInt::zero());
        CycloInt { coeffs: p }
    }

    fn monomial(&self, e: i64) -> CycloInt {
        let e = e.rem_euclid(self.order as i64) as usize;
        let mut p = vec![BigInt::zero(); e.max(self.degree) + 1];
        p[e] = BigInt::one();
        self.reduce(p)
    }

    fn mul(&self, a: &CycloInt, b: &CycloInt) -> CycloInt {
        if a.is_zero() || b.is_zero() {
            return CycloInt {
                coeffs: vec![BigInt::zero(); self.degree],
            };
        }
        let mut p = vec![BigInt::zero(); 2 * self.degree];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        self.reduce(p)
    }

    fn sub(&self, a: &CycloInt, b: &CycloInt) -> CycloInt {
        CycloInt {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl CycloInt {
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

fn remove_content(row: &mut [CycloInt]) {
    let mut g = BigInt::zero();
    for e in row.iter() {
        for c in &e.coeffs {
            g = g.gcd(c);
        }
    }
    if g > BigInt::one() {
        for e in row.iter_mut() {
            for c in e.coeffs.iter_mut() {
                *c = &*c / &g;
            }
        }
    }
}

/// Exact rank over `ℚ(ζ_m)` (equivalently over `ℂ`) of the matrix whose
/// entry `(i, j)` is `ζ_m^{exps[i][j]}`.
pub fn exact_rank(m: u64, exps: &[Vec<i64>]) -> Result<usize> {
    if exps.is_empty() {
        return Ok(0);
    }
    let cols = exps[0].len();
    if exps.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(cols, 0));
    }
    let ring = CycloRing::new(m)?;
    let mut rows: Vec<Vec<CycloInt>> = exps
        .iter()
        .map(|r| r.iter().map(|&e| ring.monomial(e)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..cols {
                let lhs = ring.mul(&prow[col], &row[j]);
                let rhs = ring.mul(&factor, &prow[j]);
                row[j] = ring.sub(&lhs, &rhs);
            }
            remove_content(row);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}

/// Orders `m ≥ 1` with `φ(m) ≤ degree`: the only cyclotomic factors a
/// polynomial of that degree can have.
pub fn orders_up_to_degree(degree: u64) -> Vec<u64> {
    if degree == 0 {
        return Vec::new();
    }
    // φ(m) ≥ sqrt(m / 2) for every m.
    let limit = 2 * degree * degree + 2;
    (1..=limit.min(MAX_ORDER)).filter(|&m| totient(m) <= degree).collect()
}
