//! Exact 2-D aperiodic autocorrelation and the GCAS decision procedure.
//!
//! Everything here is recomputed from exponent arrays. For arrays
//! `C = ξ^c`, the autocorrelation at shift `(u1, u2)` is
//! `Σ_{g,i} ξ^{c[g+u1][i+u2] - c[g][i]}` over the overlapping positions, so
//! it is a [`CyclotomicSum`] whose coefficients count exponent differences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::construct::ArraySet;
use crate::cyclotomic::CyclotomicSum;
use crate::egbf::ExponentArray;
use crate::error::{GcasError, Result};

/// A 2-D shift `(u1, u2)` with `|u1| < L1`, `|u2| < L2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shift {
    pub u1: i64,
    pub u2: i64,
}

impl Shift {
    pub const ORIGIN: Shift = Shift { u1: 0, u2: 0 };

    pub fn new(u1: i64, u2: i64) -> Self {
        Self { u1, u2 }
    }

    pub fn negated(self) -> Self {
        Self { u1: -self.u1, u2: -self.u2 }
    }

    fn check(self, rows: usize, cols: usize) -> Result<()> {
        if self.u1.unsigned_abs() as usize >= rows || self.u2.unsigned_abs() as usize >= cols {
            return Err(GcasError::Range(format!(
                "shift ({}, {}) outside (-{rows}, {rows}) × (-{cols}, {cols})",
                self.u1, self.u2
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u1, self.u2)
    }
}

/// Every shift of an `rows × cols` array, lexicographic.
pub fn all_shifts(rows: usize, cols: usize) -> impl Iterator<Item = Shift> {
    let (r, c) = (rows as i64, cols as i64);
    (1 - r..r).flat_map(move |u1| (1 - c..c).map(move |u2| Shift::new(u1, u2)))
}

/// Shifts with `u1 > 0`, or `u1 = 0` and `u2 >= 0`. Together with their
/// negations they cover every shift.
pub fn half_shifts(rows: usize, cols: usize) -> impl Iterator<Item = Shift> {
    all_shifts(rows, cols).filter(|s| s.u1 > 0 || (s.u1 == 0 && s.u2 >= 0))
}

/// Adds the exponent-difference histogram of `c` at `s` into `hist`, indexed
/// by `c[g+u1][i+u2] + q - c[g][i]`. `s` must be in range.
#[inline]
fn accumulate(hist: &mut [u32], c: &ExponentArray, s: Shift) {
    let (rows, cols) = (c.rows() as i64, c.cols() as i64);
    let q = c.modulus().get();
    let g_range = (-s.u1).max(0)..(rows - s.u1).min(rows);
    let i_lo = (-s.u2).max(0) as usize;
    let i_hi = (cols - s.u2).min(cols) as usize;
    let j_lo = (i_lo as i64 + s.u2) as usize;
    for g in g_range {
        let here = &c.row(g as usize)[i_lo..i_hi];
        let there = &c.row((g + s.u1) as usize)[j_lo..j_lo + (i_hi - i_lo)];
        for (&a, &b) in there.iter().zip(here) {
            hist[(a + q - b) as usize] += 1;
        }
    }
}

fn fold_hist(hist: &[u32], c: &ExponentArray) -> CyclotomicSum {
    let q = c.modulus();
    let mut out = CyclotomicSum::zero(q);
    for (k, &n) in hist.iter().enumerate().filter(|(_, &n)| n != 0) {
        out.add_term(k as i64, n as i64);
    }
    out
}

/// Aperiodic autocorrelation of `ξ^c` at shift `s`, exactly.
pub fn aacf(c: &ExponentArray, s: Shift) -> Result<CyclotomicSum> {
    s.check(c.rows(), c.cols())?;
    let mut hist = vec![0u32; 2 * c.modulus().get() as usize];
    accumulate(&mut hist, c, s);
    Ok(fold_hist(&hist, c))
}

/// Sum of member autocorrelations at `s`.
pub fn aacf_set_sum(set: &ArraySet, s: Shift) -> Result<CyclotomicSum> {
    let (rows, cols) = set.shape();
    s.check(rows, cols)?;
    let first = set
        .members()
        .first()
        .ok_or_else(|| GcasError::Validation("array set is empty".into()))?;
    let mut hist = vec![0u32; 2 * set.modulus().get() as usize];
    for m in set.members() {
        accumulate(&mut hist, m, s);
    }
    Ok(fold_hist(&hist, first))
}

/// Outcome of the complementarity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub set_size: usize,
    pub rows: usize,
    pub cols: usize,
    /// Autocorrelation sum at the origin, when it is a rational integer.
    pub peak: Option<i64>,
    /// Every non-origin shift whose sum is not exactly zero, sorted.
    pub nonzero_shifts: Vec<(Shift, CyclotomicSum)>,
    pub is_gcas: bool,
    /// Number of shifts whose sums were evaluated directly.
    pub shifts_evaluated: usize,
    pub strategy_notes: String,
}

impl VerificationReport {
    pub fn expected_peak(&self) -> i64 {
        (self.set_size * self.rows * self.cols) as i64
    }

    /// `"(N,L1,L2)"`.
    pub fn parameters(&self) -> String {
        format!("({},{},{})", self.set_size, self.rows, self.cols)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = (2 * self.rows - 1) * (2 * self.cols - 1);
        writeln!(f, "set size: {}, array shape: {}×{}", self.set_size, self.rows, self.cols)?;
        match self.peak {
            Some(p) => writeln!(f, "peak={p} (expected {})", self.expected_peak())?,
            None => writeln!(f, "peak=<not an integer> (expected {})", self.expected_peak())?,
        }
        writeln!(
            f,
            "shifts: {total} total, {} evaluated, {} nonzero",
            self.shifts_evaluated,
            self.nonzero_shifts.len()
        )?;
        for (s, v) in &self.nonzero_shifts {
            writeln!(f, "  nonzero at {s}: {v}")?;
        }
        if !self.strategy_notes.is_empty() {
            writeln!(f, "notes: {}", self.strategy_notes)?;
        }
        let verdict = if self.is_gcas { "yes" } else { "no" };
        write!(f, "GCAS: {verdict} {}", self.parameters())
    }
}

fn build_report<I>(set: &ArraySet, shifts: I, mirror: bool) -> VerificationReport
where
    I: Iterator<Item = Shift>,
{
    let (rows, cols) = set.shape();
    let first = &set.members()[0];
    let mut hist = vec![0u32; 2 * set.modulus().get() as usize];
    let mut peak = None;
    let mut nonzero = Vec::new();
    let mut evaluated = 0;
    for s in shifts {
        hist.fill(0);
        for m in set.members() {
            accumulate(&mut hist, m, s);
        }
        evaluated += 1;
        let value = fold_hist(&hist, first);
        if s == Shift::ORIGIN {
            peak = value.magnitude_of_real_integer();
        } else if !value.is_zero() {
            if mirror {
                nonzero.push((s.negated(), value.conjugate()));
            }
            nonzero.push((s, value));
        }
    }
    nonzero.sort_by_key(|(s, _)| *s);
    let expected = (set.len() * rows * cols) as i64;
    VerificationReport {
        set_size: set.len(),
        rows,
        cols,
        peak,
        is_gcas: nonzero.is_empty() && peak == Some(expected),
        nonzero_shifts: nonzero,
        shifts_evaluated: evaluated,
        strategy_notes: String::new(),
    }
}

/// Decides whether `set` is a GCAS. Only half of the shifts are evaluated;
/// the sum at `-s` is the conjugate of the sum at `s`.
pub fn check_gcas(set: &ArraySet) -> Result<VerificationReport> {
    if set.is_empty() {
        return Err(GcasError::Validation("array set is empty".into()));
    }
    let (rows, cols) = set.shape();
    Ok(build_report(set, half_shifts(rows, cols), true))
}

/// [`check_gcas`] without the symmetry shortcut.
pub fn check_gcas_all_shifts(set: &ArraySet) -> Result<VerificationReport> {
    if set.is_empty() {
        return Err(GcasError::Validation("array set is empty".into()));
    }
    let (rows, cols) = set.shape();
    Ok(build_report(set, all_shifts(rows, cols), false))
}

/// Exact check of `ρ(c; u1, u2) = ρ*(c; -u1, -u2)` at every shift.
pub fn check_conjugate_symmetry(c: &ExponentArray) -> bool {
    all_shifts(c.rows(), c.cols()).all(|s| {
        let here = aacf(c, s).expect("shift in range");
        let there = aacf(c, s.negated()).expect("shift in range");
        here == there.conjugate()
    })
}
