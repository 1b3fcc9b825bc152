//! Two-dimensional extended generalized Boolean functions (EGBFs) and their
//! materialization into `q`-ary exponent arrays.
//!
//! An EGBF maps row digits `(x_1..x_m)` and column digits `(y_1..y_n)` to
//! `Z_q`. The array entry at `(g, i)` is the function value at the digit
//! expansions of `g` and `i`.
//!
//! Monomial terms are read as `λ_{γ,l} · z_l^γ` (variable `z_l` raised to the
//! power `γ`). Powers are taken over the integers and then reduced mod `q`.

use std::fmt;

use crate::digits::{checked_pow, index_to_digits, is_unit, mod_pow, unified_digits, DigitVector, Modulus};
use crate::error::{GcasError, Result};

/// Upper bound on the number of entries of a single array.
pub const MAX_ARRAY_ENTRIES: u64 = 1 << 20;

/// An `L1 × L2` array over `Z_q`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentArray {
    q: Modulus,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl ExponentArray {
    pub fn new(q: Modulus, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GcasError::Validation(format!("array shape {rows}×{cols} is empty")));
        }
        if rows.checked_mul(cols) != Some(entries.len()) {
            return Err(GcasError::Validation(format!(
                "{} entries do not fill a {rows}×{cols} array",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= q.get()) {
            return Err(GcasError::Validation(format!("entry {bad} is not in Z_{q}")));
        }
        Ok(Self { q, rows, cols, entries })
    }

    pub fn from_rows(q: Modulus, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GcasError::Validation("ragged array rows".into()));
        }
        Self::new(q, rows.len(), cols, rows.concat())
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, g: usize, i: usize) -> u32 {
        self.entries[g * self.cols + i]
    }

    #[inline]
    pub fn row(&self, g: usize) -> &[u32] {
        &self.entries[g * self.cols..(g + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.cols).map(<[u32]>::to_vec).collect()
    }

    /// Sets entry `(g, i)`, reducing the value mod `q`.
    pub fn set(&mut self, g: usize, i: usize, value: i64) {
        self.entries[g * self.cols + i] = self.q.reduce(value);
    }

    /// Adds `delta · plane` entrywise mod `q`.
    pub(crate) fn add_scaled(&mut self, plane: &[u32], delta: u64) {
        let q = self.q.get() as u64;
        let delta = delta % q;
        if delta == 0 {
            return;
        }
        for (e, &p) in self.entries.iter_mut().zip(plane) {
            *e = ((*e as u64 + delta * p as u64) % q) as u32;
        }
    }

    /// Rows as digit strings (`"00030003"`), usable only for `q <= 10`;
    /// larger alphabets print comma-separated entries.
    pub fn display_rows(&self) -> Vec<String> {
        self.entries
            .chunks(self.cols)
            .map(|row| {
                if self.q.get() <= 10 {
                    row.iter().map(|e| char::from_digit(*e, 10).unwrap()).collect()
                } else {
                    row.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                }
            })
            .collect()
    }
}

impl fmt::Debug for ExponentArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExponentArray(q={}, {:?})", self.q, self.display_rows())
    }
}

/// Checks that `blocks` (1-based indices) partition `{1..total}` into
/// nonempty ordered chains.
pub(crate) fn partition_violations(blocks: &[Vec<usize>], total: usize, what: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut seen = vec![false; total + 1];
    for (a, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            out.push(format!("{what} block {} is empty", a + 1));
        }
        for &idx in block {
            if idx == 0 || idx > total {
                out.push(format!("{what} index {idx} is outside 1..={total}"));
            } else if std::mem::replace(&mut seen[idx], true) {
                out.push(format!("{what} index {idx} appears more than once"));
            }
        }
    }
    let missing: Vec<String> =
        (1..=total).filter(|&i| !seen[i]).map(|i| i.to_string()).collect();
    if !missing.is_empty() {
        out.push(format!("{what} does not cover indices {}", missing.join(", ")));
    }
    out
}

fn chain_coefficient_violations(blocks: &[Vec<usize>], d: &[Vec<u32>], base: u32, what: &str) -> Vec<String> {
    let mut out = Vec::new();
    if d.len() != blocks.len() {
        out.push(format!(
            "{what} needs one coefficient list per block ({}), got {}",
            blocks.len(),
            d.len()
        ));
        return out;
    }
    for (a, (block, coeffs)) in blocks.iter().zip(d).enumerate() {
        let expected = block.len().saturating_sub(1);
        if coeffs.len() != expected {
            out.push(format!(
                "{what} block {} has {} variables and needs {expected} coefficients, got {}",
                a + 1,
                block.len(),
                coeffs.len()
            ));
        }
        for &c in coeffs {
            if !is_unit(c, base) {
                out.push(format!("{what} coefficient {c} in block {} is not in U({base})", a + 1));
            }
        }
    }
    out
}

fn monomial_violations(rows: &[Vec<u32>], q: u32, vars: usize, what: &str) -> Vec<String> {
    let mut out = Vec::new();
    if rows.len() > q.saturating_sub(1) as usize {
        out.push(format!("{what} has {} power rows but at most {} are allowed", rows.len(), q - 1));
    }
    for (g, row) in rows.iter().enumerate() {
        if row.len() != vars {
            out.push(format!("{what} row for power {} has {} entries, expected {vars}", g + 1, row.len()));
        }
        if let Some(bad) = row.iter().find(|&&v| v >= q) {
            out.push(format!("{what} entry {bad} is not in Z_{q}"));
        }
    }
    out
}

fn size_violations(rows_base: u32, m: usize, cols_base: u32, n: usize) -> Vec<String> {
    let size = u32::try_from(m)
        .ok()
        .zip(u32::try_from(n).ok())
        .and_then(|(m, n)| {
            let r = checked_pow(rows_base as u64, m).ok()?;
            let c = checked_pow(cols_base as u64, n).ok()?;
            r.checked_mul(c)
        });
    match size {
        Some(s) if s <= MAX_ARRAY_ENTRIES => Vec::new(),
        _ => vec![format!(
            "array size {rows_base}^{m} × {cols_base}^{n} exceeds {MAX_ARRAY_ENTRIES} entries"
        )],
    }
}

/// Sum of `λ_{γ,l} · v_l^γ` over the given power rows.
fn monomial_sum(rows: &[Vec<u32>], vars: &[u32], q: Modulus) -> u64 {
    let qv = q.get() as u64;
    let mut acc = 0u64;
    for (g, row) in rows.iter().enumerate() {
        let power = g as u64 + 1;
        for (&lambda, &v) in row.iter().zip(vars) {
            if lambda != 0 {
                acc = (acc + lambda as u64 * mod_pow(v as u64, power, q) as u64) % qv;
            }
        }
    }
    acc
}

/// `Σ_α Σ_β d_{α,β} v_{π_α(β)} v_{π_α(β+1)}`, not yet scaled.
fn chain_sum(blocks: &[Vec<usize>], d: &[Vec<u32>], vars: &[u32], q: u64) -> u64 {
    let mut acc = 0u64;
    for (block, coeffs) in blocks.iter().zip(d) {
        for (pair, &c) in block.windows(2).zip(coeffs) {
            let prod = vars[pair[0] - 1] as u64 * vars[pair[1] - 1] as u64 % q;
            acc = (acc + c as u64 * prod) % q;
        }
    }
    acc
}

/// EGBF of the single-alphabet construction, over `Z_b^m × Z_b^n`.
///
/// Variables `z_1..z_{m+n}` are the row digits followed by the column
/// digits. `partitions[α]` lists the chain `π_α(1), π_α(2), ...` with 1-based
/// variable indices, and `d[α][β]` is the coefficient linking `π_α(β+1)` and
/// `π_α(β+2)` (0-based `β`). `lambda[γ-1][l-1]` is `λ_{γ,l}`; missing power
/// rows are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Function {
    pub q: Modulus,
    pub b: u32,
    pub m: usize,
    pub n: usize,
    pub partitions: Vec<Vec<usize>>,
    pub d: Vec<Vec<u32>>,
    pub lambda: Vec<Vec<u32>>,
    pub lambda0: u32,
}

impl Theorem1Function {
    /// Function with chains `partitions`, all chain coefficients 1 and no
    /// affine part.
    pub fn with_unit_chains(q: Modulus, b: u32, m: usize, n: usize, partitions: Vec<Vec<usize>>) -> Self {
        let d = partitions.iter().map(|p| vec![1; p.len().saturating_sub(1)]).collect();
        Self { q, b, m, n, partitions, d, lambda: Vec::new(), lambda0: 0 }
    }

    pub fn k(&self) -> usize {
        self.partitions.len()
    }

    pub fn num_vars(&self) -> usize {
        self.m + self.n
    }

    /// Every violated structural constraint; empty when well-formed.
    pub fn violations(&self) -> Vec<String> {
        let q = self.q.get();
        let vars = self.num_vars();
        let mut out = Vec::new();
        if self.b < 2 {
            out.push(format!("b = {} must be at least 2", self.b));
        } else if q % self.b != 0 {
            out.push(format!("b = {} must divide q = {q}", self.b));
        }
        if self.m < 1 {
            out.push("m must be at least 1".into());
        }
        let k = self.k();
        if k < 1 || k > vars {
            out.push(format!("k = {k} must satisfy 1 <= k <= m + n = {vars}"));
        }
        out.extend(partition_violations(&self.partitions, vars, "partition"));
        if self.b >= 2 {
            out.extend(chain_coefficient_violations(&self.partitions, &self.d, self.b, "d"));
            out.extend(size_violations(self.b, self.m, self.b, self.n));
        }
        out.extend(monomial_violations(&self.lambda, q, vars, "lambda"));
        if self.lambda0 >= q {
            out.push(format!("lambda0 = {} is not in Z_{q}", self.lambda0));
        }
        out
    }

    fn check_digits(&self, g: &DigitVector, i: &DigitVector) -> Result<()> {
        if g.base() != self.b || i.base() != self.b {
            return Err(GcasError::Validation(format!(
                "digits must be base {}, got {} and {}",
                self.b,
                g.base(),
                i.base()
            )));
        }
        if g.len() != self.m || i.len() != self.n {
            return Err(GcasError::Validation(format!(
                "expected {} row and {} column digits, got {} and {}",
                self.m,
                self.n,
                g.len(),
                i.len()
            )));
        }
        Ok(())
    }

    /// Evaluates without digit checks; `z` is the unified variable vector.
    pub(crate) fn eval_unified(&self, z: &[u32]) -> u32 {
        let q = self.q.get() as u64;
        let scale = q / self.b as u64;
        let quad = scale * chain_sum(&self.partitions, &self.d, z, q) % q;
        let affine = monomial_sum(&self.lambda, z, self.q);
        ((quad + affine + self.lambda0 as u64) % q) as u32
    }
}

/// EGBF of the two-alphabet construction, over `Z_{b1}^m × Z_{b2}^n`.
///
/// `x_partitions` chain the row variables `x_1..x_m`, `y_partitions` chain
/// the column variables `y_1..y_n`; both use 1-based indices into their own
/// family. `lambda` weights powers of `x_l`, `nu` powers of `y_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Function {
    pub q: Modulus,
    pub b1: u32,
    pub b2: u32,
    pub m: usize,
    pub n: usize,
    pub x_partitions: Vec<Vec<usize>>,
    pub y_partitions: Vec<Vec<usize>>,
    pub d: Vec<Vec<u32>>,
    pub d_prime: Vec<Vec<u32>>,
    pub lambda: Vec<Vec<u32>>,
    pub nu: Vec<Vec<u32>>,
    pub lambda0: u32,
}

impl Theorem2Function {
    /// All-zero function with the given chain structure and unit chain
    /// coefficients.
    pub fn with_unit_chains(
        q: Modulus,
        (b1, m, x_partitions): (u32, usize, Vec<Vec<usize>>),
        (b2, n, y_partitions): (u32, usize, Vec<Vec<usize>>),
    ) -> Self {
        let ones = |p: &Vec<Vec<usize>>| p.iter().map(|c| vec![1; c.len().saturating_sub(1)]).collect();
        Self {
            q,
            b1,
            b2,
            m,
            n,
            d: ones(&x_partitions),
            d_prime: ones(&y_partitions),
            x_partitions,
            y_partitions,
            lambda: Vec::new(),
            nu: Vec::new(),
            lambda0: 0,
        }
    }

    pub fn k1(&self) -> usize {
        self.x_partitions.len()
    }

    pub fn k2(&self) -> usize {
        self.y_partitions.len()
    }

    pub fn violations(&self) -> Vec<String> {
        let q = self.q.get();
        let mut out = Vec::new();
        for (name, b) in [("b1", self.b1), ("b2", self.b2)] {
            if b < 2 {
                out.push(format!("{name} = {b} must be at least 2"));
            } else if q % b != 0 {
                out.push(format!("{name} = {b} must divide q = {q}"));
            }
        }
        if self.m < 1 {
            out.push("m must be at least 1".into());
        }
        if self.n < 1 {
            out.push("n must be at least 1".into());
        }
        let (k1, k2) = (self.k1(), self.k2());
        if k1 < 1 || k1 > self.m {
            out.push(format!("k1 = {k1} must satisfy 1 <= k1 <= m = {}", self.m));
        }
        if k2 < 1 || k2 > self.n {
            out.push(format!("k2 = {k2} must satisfy 1 <= k2 <= n = {}", self.n));
        }
        out.extend(partition_violations(&self.x_partitions, self.m, "x partition"));
        out.extend(partition_violations(&self.y_partitions, self.n, "y partition"));
        if self.b1 >= 2 {
            out.extend(chain_coefficient_violations(&self.x_partitions, &self.d, self.b1, "d"));
        }
        if self.b2 >= 2 {
            out.extend(chain_coefficient_violations(&self.y_partitions, &self.d_prime, self.b2, "d_prime"));
        }
        if self.b1 >= 2 && self.b2 >= 2 {
            out.extend(size_violations(self.b1, self.m, self.b2, self.n));
        }
        out.extend(monomial_violations(&self.lambda, q, self.m, "lambda"));
        out.extend(monomial_violations(&self.nu, q, self.n, "nu"));
        if self.lambda0 >= q {
            out.push(format!("lambda0 = {} is not in Z_{q}", self.lambda0));
        }
        out
    }

    pub(crate) fn eval_split(&self, x: &[u32], y: &[u32]) -> u32 {
        let q = self.q.get() as u64;
        let qx = (q / self.b1 as u64) * chain_sum(&self.x_partitions, &self.d, x, q) % q;
        let qy = (q / self.b2 as u64) * chain_sum(&self.y_partitions, &self.d_prime, y, q) % q;
        let ax = monomial_sum(&self.lambda, x, self.q);
        let ay = monomial_sum(&self.nu, y, self.q);
        ((qx + qy + ax + ay + self.lambda0 as u64) % q) as u32
    }
}

/// Value of the single-alphabet EGBF at row digits `g` and column digits `i`.
pub fn eval_t1(f: &Theorem1Function, g_digits: &DigitVector, i_digits: &DigitVector) -> Result<u32> {
    f.check_digits(g_digits, i_digits)?;
    let z = unified_digits(g_digits, i_digits)?;
    Ok(f.eval_unified(z.digits()))
}

/// Value of the two-alphabet EGBF at row digits `g` (base `b1`) and column
/// digits `i` (base `b2`).
pub fn eval_t2(f: &Theorem2Function, g_digits: &DigitVector, i_digits: &DigitVector) -> Result<u32> {
    if g_digits.base() != f.b1 || g_digits.len() != f.m {
        return Err(GcasError::Validation(format!(
            "row digits must be {} base-{} digits, got {} base-{}",
            f.m,
            f.b1,
            g_digits.len(),
            g_digits.base()
        )));
    }
    if i_digits.base() != f.b2 || i_digits.len() != f.n {
        return Err(GcasError::Validation(format!(
            "column digits must be {} base-{} digits, got {} base-{}",
            f.n,
            f.b2,
            i_digits.len(),
            i_digits.base()
        )));
    }
    Ok(f.eval_split(g_digits.digits(), i_digits.digits()))
}

/// Array shape `(b1^m, b2^n)`, bounded by [`MAX_ARRAY_ENTRIES`].
pub fn array_shape(b1: u32, m: usize, b2: u32, n: usize) -> Result<(usize, usize)> {
    if b1 < 2 || b2 < 2 {
        return Err(GcasError::Validation(format!("digit bases {b1}, {b2} must be at least 2")));
    }
    if !size_violations(b1, m, b2, n).is_empty() {
        return Err(GcasError::Capacity(format!(
            "{b1}^{m} × {b2}^{n} exceeds {MAX_ARRAY_ENTRIES} entries"
        )));
    }
    Ok((b1.pow(m as u32) as usize, b2.pow(n as u32) as usize))
}

/// Materializes `evaluator` into the `b1^m × b2^n` array whose `(g, i)`
/// entry is the evaluator at the digit expansions of `g` and `i`. Values are
/// reduced mod `q`.
pub fn materialize<F>(evaluator: F, q: Modulus, b1: u32, m: usize, b2: u32, n: usize) -> Result<ExponentArray>
where
    F: Fn(&DigitVector, &DigitVector) -> Result<u32>,
{
    let (rows, cols) = array_shape(b1, m, b2, n)?;
    let col_digits = (0..cols)
        .map(|i| index_to_digits(i as u64, b2, n))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::with_capacity(rows * cols);
    for g in 0..rows {
        let gd = index_to_digits(g as u64, b1, m)?;
        for id in &col_digits {
            entries.push(evaluator(&gd, id)? % q.get());
        }
    }
    ExponentArray::new(q, rows, cols, entries)
}

/// Array of the single-alphabet EGBF.
pub fn materialize_t1(f: &Theorem1Function) -> Result<ExponentArray> {
    materialize(|g, i| eval_t1(f, g, i), f.q, f.b, f.m, f.b, f.n)
}

/// Array of the two-alphabet EGBF.
pub fn materialize_t2(f: &Theorem2Function) -> Result<ExponentArray> {
    materialize(|g, i| eval_t2(f, g, i), f.q, f.b1, f.m, f.b2, f.n)
}
