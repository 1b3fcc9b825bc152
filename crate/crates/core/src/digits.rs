//! Residue and mixed-radix digit arithmetic.
//!
//! Digits are stored least-significant first: `digits[0]` is the coefficient
//! of `base^0`. Documentation elsewhere in the crate numbers variables from 1
//! (`x_1 .. x_m`), which maps to storage index 0.

use std::fmt;

use crate::error::{GcasError, Result};

/// Largest supported phase alphabet.
pub const MAX_MODULUS: u32 = 1 << 16;

/// Phase alphabet size `q`; arrays live over `Z_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(GcasError::Range(format!("modulus q = {q} must be at least 2")));
        }
        if q > MAX_MODULUS {
            return Err(GcasError::Capacity(format!("modulus q = {q} exceeds {MAX_MODULUS}")));
        }
        Ok(Self(q))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Canonical representative of `v` in `[0, q)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A base-`b` digit vector, least-significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    base: u32,
    digits: Vec<u32>,
}

impl DigitVector {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(GcasError::Validation(format!("digit base {base} must be at least 2")));
        }
        if let Some((pos, d)) = digits.iter().enumerate().find(|(_, &d)| d >= base) {
            return Err(GcasError::Validation(format!(
                "digit {d} at position {pos} is not below base {base}"
            )));
        }
        Ok(Self { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// `base^exp` with overflow reported as a capacity error.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| GcasError::Capacity(format!("{base}^{exp} overflows 64 bits")))
}

/// Expands `value` into exactly `length` base-`base` digits.
pub fn index_to_digits(value: u64, base: u32, length: usize) -> Result<DigitVector> {
    if base < 2 {
        return Err(GcasError::Validation(format!("digit base {base} must be at least 2")));
    }
    let limit = u32::try_from(length)
        .ok()
        .and_then(|len| (base as u64).checked_pow(len));
    if let Some(limit) = limit {
        if value >= limit {
            return Err(GcasError::Range(format!(
                "{value} does not fit in {length} base-{base} digits"
            )));
        }
    }
    let mut rest = value;
    let digits = (0..length)
        .map(|_| {
            let d = (rest % base as u64) as u32;
            rest /= base as u64;
            d
        })
        .collect();
    Ok(DigitVector { base, digits })
}

/// Inverse of [`index_to_digits`]. An empty vector has value 0.
pub fn digits_to_index(d: &DigitVector) -> Result<u64> {
    let base = d.base as u64;
    let mut acc: u64 = 0;
    for &digit in d.digits.iter().rev() {
        if digit as u64 >= base {
            return Err(GcasError::Validation(format!("digit {digit} is not below base {base}")));
        }
        acc = acc
            .checked_mul(base)
            .and_then(|a| a.checked_add(digit as u64))
            .ok_or_else(|| GcasError::Capacity("digit vector value overflows 64 bits".into()))?;
    }
    Ok(acc)
}

/// Joins row digits `(g_1..g_m)` and column digits `(i_1..i_n)` into the
/// single variable vector `(z_1..z_{m+n})`, with `z_l = i_{l-m}` for `l > m`.
pub fn unified_digits(g_digits: &DigitVector, i_digits: &DigitVector) -> Result<DigitVector> {
    if g_digits.base != i_digits.base {
        return Err(GcasError::Validation(format!(
            "row digits use base {} but column digits use base {}",
            g_digits.base, i_digits.base
        )));
    }
    let mut digits = Vec::with_capacity(g_digits.len() + i_digits.len());
    digits.extend_from_slice(&g_digits.digits);
    digits.extend_from_slice(&i_digits.digits);
    Ok(DigitVector { base: g_digits.base, digits })
}

/// `base_val^exponent mod q`, with `0^0 = 1`.
pub fn mod_pow(base_val: u64, exponent: u64, modulus: Modulus) -> u32 {
    let q = modulus.get() as u64;
    let mut result = 1 % q;
    let mut b = base_val % q;
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    result as u32
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Membership in `U(b)`: `1 <= r < b` and `gcd(r, b) = 1`.
pub fn is_unit(r: u32, b: u32) -> bool {
    r >= 1 && r < b && gcd(r as u64, b as u64) == 1
}
