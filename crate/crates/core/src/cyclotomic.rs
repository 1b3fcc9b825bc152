//! Exact arithmetic on formal sums of `q`-th roots of unity.
//!
//! A [`CyclotomicSum`] stores the multiplicity of each power `ξ_q^j`. A sum
//! vanishes exactly when its coefficient polynomial is divisible by the
//! cyclotomic polynomial `Φ_q`, which is the zero test used throughout the
//! verifier. Floating-point evaluation is provided only as a cross-check.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::digits::{Modulus, MAX_MODULUS};
use crate::error::{GcasError, Result};

/// Dense integer polynomial, `coeffs[i]` is the coefficient of `x^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = -1;
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = a
                    .checked_mul(b)
                    .and_then(|p| out[i + j].checked_add(p))
                    .ok_or_else(|| GcasError::Internal("polynomial product overflows".into()))?;
            }
        }
        Ok(Self::new(out))
    }

    /// Quotient of an exact division by a monic polynomial. A nonzero
    /// remainder is reported as an internal error.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (quotient, remainder) = divrem_monic(&self.coeffs, divisor)?;
        if remainder.iter().any(|&c| c != 0) {
            return Err(GcasError::Internal(format!(
                "division by a degree-{} polynomial left a nonzero remainder",
                divisor.degree().unwrap_or(0)
            )));
        }
        let quotient = quotient
            .into_iter()
            .map(|c| i64::try_from(c).map_err(|_| GcasError::Internal("quotient overflows".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(quotient))
    }
}

/// Long division of `dividend` by the monic `divisor`, returning
/// `(quotient, remainder)` with 128-bit working precision.
fn divrem_monic(dividend: &[i64], divisor: &IntPolynomial) -> Result<(Vec<i128>, Vec<i128>)> {
    let d = divisor
        .degree()
        .ok_or_else(|| GcasError::Internal("division by the zero polynomial".into()))?;
    if divisor.leading() != 1 {
        return Err(GcasError::Internal("divisor is not monic".into()));
    }
    let mut rem: Vec<i128> = dividend.iter().map(|&c| c as i128).collect();
    if rem.len() <= d {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![0i128; rem.len() - d];
    for top in (d..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        quot[top - d] = c;
        for (j, &p) in divisor.coeffs.iter().enumerate() {
            let slot = &mut rem[top - d + j];
            *slot = (c.checked_mul(p as i128))
                .and_then(|v| slot.checked_sub(v))
                .ok_or_else(|| GcasError::Internal("polynomial division overflows".into()))?;
        }
    }
    rem.truncate(d);
    Ok((quot, rem))
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<IntPolynomial>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<IntPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial `Φ_n`, memoized.
///
/// Computed as `(x^n - 1) / Π_{d | n, d < n} Φ_d`. Concurrent callers may
/// compute the same entry twice; the cache keeps whichever lands first.
pub fn cyclotomic_polynomial(n: u32) -> Result<Arc<IntPolynomial>> {
    if n == 0 || n > MAX_MODULUS {
        return Err(GcasError::Range(format!("cyclotomic index {n} outside [1, {MAX_MODULUS}]")));
    }
    if let Some(p) = cyclotomic_cache().lock().expect("cache poisoned").get(&n) {
        return Ok(Arc::clone(p));
    }
    let mut product = IntPolynomial::one();
    for d in (1..n).filter(|d| n % d == 0) {
        product = product.checked_mul(&*cyclotomic_polynomial(d)?)?;
    }
    let phi = Arc::new(IntPolynomial::x_pow_minus_one(n as usize).div_exact(&product)?);
    let mut cache = cyclotomic_cache().lock().expect("cache poisoned");
    Ok(Arc::clone(cache.entry(n).or_insert(phi)))
}

/// `Σ_j coeffs[j] · ξ_q^j` with integer (possibly negative) multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicSum {
    q: Modulus,
    coeffs: Vec<i64>,
}

impl CyclotomicSum {
    pub fn zero(q: Modulus) -> Self {
        Self { q, coeffs: vec![0; q.get() as usize] }
    }

    pub fn from_coeffs(q: Modulus, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != q.get() as usize {
            return Err(GcasError::Validation(format!(
                "cyclotomic sum over q = {q} needs {q} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { q, coeffs })
    }

    /// The integer constant `c` (that is, `c · ξ^0`).
    pub fn constant(q: Modulus, c: i64) -> Self {
        let mut s = Self::zero(q);
        s.coeffs[0] = c;
        s
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Adds `weight · ξ^exponent`; the exponent is reduced mod `q`.
    pub fn add_term(&mut self, exponent: i64, weight: i64) {
        let idx = self.q.reduce(exponent) as usize;
        self.coeffs[idx] += weight;
    }

    /// Builder-style [`add_term`](Self::add_term).
    pub fn with_term(mut self, exponent: i64, weight: i64) -> Self {
        self.add_term(exponent, weight);
        self
    }

    /// Coefficient-wise sum. Both operands must share `q`.
    pub fn add_assign_sum(&mut self, other: &Self) {
        assert_eq!(self.q, other.q, "adding cyclotomic sums over different moduli");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// Complex conjugate: `ξ^j ↦ ξ^{-j}`.
    pub fn conjugate(&self) -> Self {
        let q = self.coeffs.len();
        let coeffs = (0..q).map(|j| self.coeffs[(q - j) % q]).collect();
        Self { q: self.q, coeffs }
    }

    /// Exact test for `Σ_j coeffs[j] ξ_q^j = 0`, by divisibility of the
    /// coefficient polynomial by `Φ_q`.
    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|&c| c == 0) {
            return true;
        }
        let phi = cyclotomic_polynomial(self.q.get()).expect("modulus validated at construction");
        let (_, rem) =
            divrem_monic(&self.coeffs, &phi).expect("Φ_q is monic and the sum fits in 128 bits");
        rem.iter().all(|&c| c == 0)
    }

    /// Floating-point value `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let q = self.q.get() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold((0.0, 0.0), |(re, im), (j, &c)| {
                let theta = TAU * j as f64 / q;
                (re + c as f64 * theta.cos(), im + c as f64 * theta.sin())
            })
    }

    /// The integer this sum equals, if it is a rational integer.
    ///
    /// The candidate comes from rounding the real part; it is then confirmed
    /// exactly by testing that the residual vanishes.
    pub fn magnitude_of_real_integer(&self) -> Option<i64> {
        let (re, _) = self.to_complex();
        let candidate = re.round() as i64;
        let mut residual = self.clone();
        residual.coeffs[0] -= candidate;
        residual.is_zero().then_some(candidate)
    }

    pub fn abs_weight(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match (j, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "ξ^{j}")?,
                _ => write!(f, "{a}ξ^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
