//! Candidate GCAS builders.
//!
//! Each builder materializes one base EGBF and adds, per member, a linear
//! offset form indexed by an offset tuple. Members are emitted in
//! lexicographic order of their tuples (last coordinate fastest) and each
//! member's label is its tuple.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::digits::{checked_pow, Modulus};
use crate::egbf::{materialize, materialize_t1, materialize_t2, ExponentArray, Theorem1Function, Theorem2Function};
use crate::error::{GcasError, Result};

/// Upper bound on the number of members of a generated set.
pub const MAX_SET_SIZE: u64 = 1 << 20;
/// Upper bound on the total number of entries across a generated set.
pub const MAX_SET_ENTRIES: u64 = 1 << 28;

/// An ordered multiset of equally shaped `q`-ary arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArraySet {
    q: Modulus,
    rows: usize,
    cols: usize,
    members: Vec<ExponentArray>,
    labels: Vec<Vec<u32>>,
}

impl ArraySet {
    /// `labels` may be empty, otherwise it needs one entry per member.
    pub fn new(members: Vec<ExponentArray>, labels: Vec<Vec<u32>>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| GcasError::Validation("array set is empty".into()))?;
        let (q, (rows, cols)) = (first.modulus(), first.shape());
        if let Some((idx, m)) = members
            .iter()
            .enumerate()
            .find(|(_, m)| m.modulus() != q || m.shape() != (rows, cols))
        {
            return Err(GcasError::Validation(format!(
                "member {idx} is a {}×{} array over Z_{}, expected {rows}×{cols} over Z_{q}",
                m.rows(),
                m.cols(),
                m.modulus()
            )));
        }
        if !labels.is_empty() && labels.len() != members.len() {
            return Err(GcasError::Validation(format!(
                "{} labels for {} members",
                labels.len(),
                members.len()
            )));
        }
        Ok(Self { q, rows, cols, members, labels })
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ExponentArray] {
        &self.members
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    pub fn into_members(self) -> Vec<ExponentArray> {
        self.members
    }

    /// Number of members that repeat an earlier member.
    pub fn duplicate_count(&self) -> usize {
        let mut seen = HashSet::with_capacity(self.members.len());
        self.members.iter().filter(|m| !seen.insert(m.entries())).count()
    }

    /// Member arrays as a sorted list, for multiset comparison.
    pub fn sorted_entries(&self) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self.members.iter().map(|m| m.entries().to_vec()).collect();
        v.sort_unstable();
        v
    }
}

/// How the extra `n_{k1+1}` offset term of the two-alphabet construction is
/// formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum OffsetStrategy {
    /// `n_{k1+1} · (x_{k1+1} + y_{k1+1})`, no scale.
    #[serde(rename = "as-printed")]
    AsPrintedUnscaled,
    /// `(q/N1) · n_{k1+1} · (x_{k1+1} + y_{k1+1})`.
    #[serde(rename = "as-printed-scaled")]
    AsPrintedScaled,
    /// `(q/N1) · n_{k1+1} · x_m`, the single-alphabet form.
    #[default]
    #[serde(rename = "mirror-t1")]
    MirrorTheorem1,
}

impl OffsetStrategy {
    pub const ALL: [OffsetStrategy; 3] =
        [Self::AsPrintedUnscaled, Self::AsPrintedScaled, Self::MirrorTheorem1];

    pub fn name(self) -> &'static str {
        match self {
            Self::AsPrintedUnscaled => "as-printed",
            Self::AsPrintedScaled => "as-printed-scaled",
            Self::MirrorTheorem1 => "mirror-t1",
        }
    }
}

impl fmt::Display for OffsetStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OffsetStrategy {
    type Err = GcasError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| GcasError::Parse(format!("unknown offset strategy '{s}'")))
    }
}

/// Single-alphabet construction: EGBF plus offset alphabet size `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Params {
    pub function: Theorem1Function,
    /// `N`, the alphabet of each offset coordinate.
    pub offset_order: u32,
}

/// Two-alphabet construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Params {
    pub function: Theorem2Function,
    /// `N1`, alphabet of the row-side offsets and of `n_{k1+1}`.
    pub row_offset_order: u32,
    /// `N2`, alphabet of the column-side offsets.
    pub col_offset_order: u32,
    pub strategy: OffsetStrategy,
}

fn offset_order_violations(name: &str, order: u32, base_name: &str, base: u32, q: u32) -> Vec<String> {
    let mut out = Vec::new();
    if order == 0 || q % order != 0 {
        out.push(format!("{name} = {order} must divide q = {q}"));
    }
    if order < base {
        out.push(format!("{name} = {order} must be at least {base_name} = {base}"));
    }
    out
}

fn set_size_violations(set_size: Option<u64>, entries: Option<u64>) -> Vec<String> {
    match (set_size, entries) {
        (Some(s), Some(e)) if s <= MAX_SET_SIZE && s.saturating_mul(e) <= MAX_SET_ENTRIES => Vec::new(),
        _ => vec![format!(
            "set exceeds {MAX_SET_SIZE} members or {MAX_SET_ENTRIES} total entries"
        )],
    }
}

impl Theorem1Params {
    /// `N^{k+1}`.
    pub fn set_size(&self) -> Option<u64> {
        checked_pow(self.offset_order as u64, self.function.k() as u32 + 1).ok()
    }

    fn entries(&self) -> Option<u64> {
        let f = &self.function;
        checked_pow(f.b as u64, (f.m + f.n) as u32).ok()
    }
}

impl Theorem2Params {
    /// `N1^{k1+1} · N2^{k2}`.
    pub fn set_size(&self) -> Option<u64> {
        let f = &self.function;
        let a = checked_pow(self.row_offset_order as u64, f.k1() as u32 + 1).ok()?;
        let b = checked_pow(self.col_offset_order as u64, f.k2() as u32).ok()?;
        a.checked_mul(b)
    }

    fn entries(&self) -> Option<u64> {
        let f = &self.function;
        let r = checked_pow(f.b1 as u64, f.m as u32).ok()?;
        let c = checked_pow(f.b2 as u64, f.n as u32).ok()?;
        r.checked_mul(c)
    }
}

/// All violated hypotheses of the single-alphabet construction.
pub fn validate_t1(p: &Theorem1Params) -> Result<(), Vec<String>> {
    let f = &p.function;
    let mut v = f.violations();
    v.extend(offset_order_violations("N", p.offset_order, "b", f.b, f.q.get()));
    if v.is_empty() {
        v.extend(set_size_violations(p.set_size(), p.entries()));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// All violated hypotheses of the two-alphabet construction, including the
/// index bounds the chosen offset strategy needs.
pub fn validate_t2(p: &Theorem2Params) -> Result<(), Vec<String>> {
    let f = &p.function;
    let q = f.q.get();
    let mut v = f.violations();
    v.extend(offset_order_violations("N1", p.row_offset_order, "b1", f.b1, q));
    v.extend(offset_order_violations("N2", p.col_offset_order, "b2", f.b2, q));
    match p.strategy {
        OffsetStrategy::AsPrintedUnscaled | OffsetStrategy::AsPrintedScaled => {
            let idx = f.k1() + 1;
            if idx > f.m {
                v.push(format!("strategy {} needs x_{idx}, but m = {}", p.strategy, f.m));
            }
            if idx > f.n {
                v.push(format!("strategy {} needs y_{idx}, but n = {}", p.strategy, f.n));
            }
        }
        OffsetStrategy::MirrorTheorem1 => {}
    }
    if v.is_empty() {
        v.extend(set_size_violations(p.set_size(), p.entries()));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// One coordinate of the offset tuple: coordinate value `n ∈ Z_radix` adds
/// `n · scale · plane` to the base array.
struct OffsetTerm {
    radix: u32,
    scale: u64,
    plane: Vec<u32>,
}

fn variable_plane(q: Modulus, b1: u32, m: usize, b2: u32, n: usize, var: Variable) -> Result<Vec<u32>> {
    let arr = materialize(
        |g, i| {
            Ok(match var {
                Variable::Row(l) => g.digits()[l - 1],
                Variable::Col(l) => i.digits()[l - 1],
            })
        },
        // Digits are below the bases, which divide q.
        q,
        b1,
        m,
        b2,
        n,
    )?;
    Ok(arr.entries().to_vec())
}

#[derive(Clone, Copy)]
enum Variable {
    Row(usize),
    Col(usize),
}

fn build_offset_set(base: ExponentArray, terms: &[OffsetTerm]) -> Result<ArraySet> {
    let count = terms
        .iter()
        .try_fold(1u64, |acc, t| acc.checked_mul(t.radix as u64))
        .ok_or_else(|| GcasError::Capacity("set size overflows".into()))?;
    let mut members = Vec::with_capacity(count as usize);
    let mut labels = Vec::with_capacity(count as usize);
    let mut tuple = vec![0u32; terms.len()];
    for _ in 0..count {
        let mut member = base.clone();
        for (t, &n) in terms.iter().zip(&tuple) {
            member.add_scaled(&t.plane, t.scale * n as u64);
        }
        members.push(member);
        labels.push(tuple.clone());
        for (slot, t) in tuple.iter_mut().zip(terms).rev() {
            *slot += 1;
            if *slot < t.radix {
                break;
            }
            *slot = 0;
        }
    }
    let set = ArraySet::new(members, labels)?;
    let dups = set.duplicate_count();
    if dups > 0 {
        log::debug!("{dups} of {} generated members repeat an earlier member", set.len());
    }
    Ok(set)
}

fn t1_variable(f: &Theorem1Function, l: usize) -> Variable {
    if l <= f.m {
        Variable::Row(l)
    } else {
        Variable::Col(l - f.m)
    }
}

fn t1_head_terms(p: &Theorem1Params) -> Result<Vec<OffsetTerm>> {
    let f = &p.function;
    let scale = (f.q.get() / p.offset_order) as u64;
    f.partitions
        .iter()
        .map(|chain| {
            Ok(OffsetTerm {
                radix: p.offset_order,
                scale,
                plane: variable_plane(f.q, f.b, f.m, f.b, f.n, t1_variable(f, chain[0]))?,
            })
        })
        .collect()
}

/// The `N^{k+1}`-member set: the base array plus
/// `(q/N)(Σ_α n_α z_{π_α(1)} + n_{k+1} z_m)` for every `(n_1..n_{k+1})`.
pub fn build_t1_set(p: &Theorem1Params) -> Result<ArraySet> {
    validate_t1(p).map_err(GcasError::InvalidParams)?;
    let f = &p.function;
    let mut terms = t1_head_terms(p)?;
    terms.push(OffsetTerm {
        radix: p.offset_order,
        scale: (f.q.get() / p.offset_order) as u64,
        plane: variable_plane(f.q, f.b, f.m, f.b, f.n, Variable::Row(f.m))?,
    });
    build_offset_set(materialize_t1(f)?, &terms)
}

/// The `N^k`-member set with offsets on chain heads only.
pub fn build_t1_base_set(p: &Theorem1Params) -> Result<ArraySet> {
    validate_t1(p).map_err(GcasError::InvalidParams)?;
    let terms = t1_head_terms(p)?;
    build_offset_set(materialize_t1(&p.function)?, &terms)
}

/// The `N1^{k1+1} · N2^{k2}`-member set. Tuples are ordered as
/// `(n_1..n_{k1}, n_{k1+1}, n'_1..n'_{k2})`.
pub fn build_t2_set(p: &Theorem2Params) -> Result<ArraySet> {
    validate_t2(p).map_err(GcasError::InvalidParams)?;
    let f = &p.function;
    let q = f.q.get();
    let plane = |var| variable_plane(f.q, f.b1, f.m, f.b2, f.n, var);
    let row_scale = (q / p.row_offset_order) as u64;
    let col_scale = (q / p.col_offset_order) as u64;

    let mut terms = Vec::with_capacity(f.k1() + f.k2() + 1);
    for chain in &f.x_partitions {
        terms.push(OffsetTerm { radix: p.row_offset_order, scale: row_scale, plane: plane(Variable::Row(chain[0]))? });
    }
    let extra = match p.strategy {
        OffsetStrategy::AsPrintedUnscaled | OffsetStrategy::AsPrintedScaled => {
            let idx = f.k1() + 1;
            let x = plane(Variable::Row(idx))?;
            let y = plane(Variable::Col(idx))?;
            let sum = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let scale = if p.strategy == OffsetStrategy::AsPrintedScaled { row_scale } else { 1 };
            OffsetTerm { radix: p.row_offset_order, scale, plane: sum }
        }
        OffsetStrategy::MirrorTheorem1 => {
            OffsetTerm { radix: p.row_offset_order, scale: row_scale, plane: plane(Variable::Row(f.m))? }
        }
    };
    terms.push(extra);
    for chain in &f.y_partitions {
        terms.push(OffsetTerm { radix: p.col_offset_order, scale: col_scale, plane: plane(Variable::Col(chain[0]))? });
    }
    build_offset_set(materialize_t2(f)?, &terms)
}

/// The single-alphabet worked example: `q = 6, b = 2, m = 1, n = 3, N = 3`,
/// one chain `(4, 1, 2, 3)` with unit coefficients.
pub fn example1_params() -> Theorem1Params {
    let q = Modulus::new(6).expect("6 is a valid modulus");
    Theorem1Params {
        function: Theorem1Function::with_unit_chains(q, 2, 1, 3, vec![vec![4, 1, 2, 3]]),
        offset_order: 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: u32) -> Modulus {
        Modulus::new(v).unwrap()
    }

    fn t2_small(strategy: OffsetStrategy) -> Theorem2Params {
        Theorem2Params {
            function: Theorem2Function::with_unit_chains(q(4), (2, 2, vec![vec![1, 2]]), (2, 2, vec![vec![1, 2]])),
            row_offset_order: 2,
            col_offset_order: 2,
            strategy,
        }
    }

    #[test]
    fn validate_t1_example1() {
        assert_eq!(validate_t1(&example1_params()), Ok(()));
    }

    #[test]
    fn validate_t1_offset_order_must_divide_q() {
        let p = Theorem1Params { offset_order: 4, ..example1_params() };
        let v = validate_t1(&p).unwrap_err();
        assert!(v.iter().any(|s| s.contains("N = 4 must divide q = 6")), "{v:?}");
    }

    #[test]
    fn validate_t1_unit_coefficients() {
        let mut p = example1_params();
        p.function.d[0][0] = 0;
        let v = validate_t1(&p).unwrap_err();
        assert!(v.iter().any(|s| s.contains("not in U(2)")), "{v:?}");
    }

    #[test]
    fn validate_t1_collects_every_violation() {
        let mut p = example1_params();
        p.offset_order = 1;
        p.function.lambda0 = 9;
        p.function.partitions = vec![vec![1, 2], vec![]];
        let v = validate_t1(&p).unwrap_err();
        assert!(v.len() >= 4, "{v:?}");
    }

    #[test]
    fn example1_set_shape_and_first_member() {
        let set = build_t1_set(&example1_params()).unwrap();
        assert_eq!(set.len(), 9);
        assert_eq!(set.shape(), (2, 8));
        assert_eq!(set.labels()[0], vec![0, 0]);
        assert_eq!(set.members()[0].display_rows(), vec!["00030003", "03003033"]);
        assert_eq!(set.duplicate_count(), 0);
    }

    #[test]
    fn zero_offset_member_is_base_array() {
        let p = Theorem1Params {
            function: Theorem1Function::with_unit_chains(q(4), 2, 2, 1, vec![vec![2, 3], vec![1]]),
            offset_order: 2,
        };
        let set = build_t1_set(&p).unwrap();
        assert_eq!(set.len(), 8);
        assert_eq!(set.members()[0], materialize_t1(&p.function).unwrap());
    }

    #[test]
    fn base_set_of_example1() {
        let p = example1_params();
        let set = build_t1_base_set(&p).unwrap();
        assert_eq!(set.len(), 3);
        // f, f + 2 y_3, f + 4 y_3: only columns with y_3 = 1 (i >= 4) move.
        let f = materialize_t1(&p.function).unwrap();
        for (n1, member) in set.members().iter().enumerate() {
            for g in 0..2 {
                for i in 0..8 {
                    let y3 = (i >= 4) as u32;
                    assert_eq!(member.get(g, i), (f.get(g, i) + 2 * n1 as u32 * y3) % 6);
                }
            }
        }
    }

    #[test]
    fn base_set_counting() {
        // k = m + n, N = b = 2: 2^{m+n} members.
        let p = Theorem1Params {
            function: Theorem1Function::with_unit_chains(q(2), 2, 2, 1, vec![vec![1], vec![2], vec![3]]),
            offset_order: 2,
        };
        assert_eq!(build_t1_base_set(&p).unwrap().len(), 8);
        assert_eq!(build_t1_set(&p).unwrap().len(), 16);
    }

    #[test]
    fn head_on_last_row_variable_yields_repeats() {
        let p = Theorem1Params {
            function: Theorem1Function::with_unit_chains(q(6), 2, 1, 2, vec![vec![1], vec![2], vec![3]]),
            offset_order: 3,
        };
        let set = build_t1_set(&p).unwrap();
        assert_eq!(set.len(), 81);
        assert_eq!(set.duplicate_count(), 81 - 27);
    }

    #[test]
    fn validate_t2_examples() {
        assert_eq!(validate_t2(&t2_small(OffsetStrategy::MirrorTheorem1)), Ok(()));
        let bad = Theorem2Params { row_offset_order: 3, ..t2_small(OffsetStrategy::MirrorTheorem1) };
        assert!(validate_t2(&bad).unwrap_err().iter().any(|s| s.contains("N1 = 3 must divide")));
        assert_eq!(validate_t2(&t2_small(OffsetStrategy::AsPrintedUnscaled)), Ok(()));
    }

    #[test]
    fn validate_t2_strategy_index_bounds() {
        let mut p = t2_small(OffsetStrategy::AsPrintedScaled);
        p.function.x_partitions = vec![vec![1], vec![2]];
        p.function.d = vec![vec![], vec![]];
        let v = validate_t2(&p).unwrap_err();
        assert!(v.iter().any(|s| s.contains("needs x_3")), "{v:?}");
        p.strategy = OffsetStrategy::MirrorTheorem1;
        assert_eq!(validate_t2(&p), Ok(()));
    }

    #[test]
    fn t2_member_count() {
        let p = Theorem2Params {
            function: Theorem2Function::with_unit_chains(q(6), (2, 2, vec![vec![1, 2]]), (3, 1, vec![vec![1]])),
            row_offset_order: 2,
            col_offset_order: 3,
            strategy: OffsetStrategy::MirrorTheorem1,
        };
        let set = build_t2_set(&p).unwrap();
        assert_eq!(set.len(), 12);
        assert_eq!(set.shape(), (4, 3));
        assert_eq!(set.members()[0], materialize_t2(&p.function).unwrap());
        assert_eq!(set.labels()[11], vec![1, 1, 2]);
    }

    #[test]
    fn t2_as_printed_unscaled_offsets() {
        let p = t2_small(OffsetStrategy::AsPrintedUnscaled);
        let set = build_t2_set(&p).unwrap();
        let f = materialize_t2(&p.function).unwrap();
        // Label (0, 1, 0): only the extra term, n_2 (x_2 + y_2) unscaled.
        let idx = set.labels().iter().position(|l| l == &[0, 1, 0]).unwrap();
        let member = &set.members()[idx];
        for g in 0..4 {
            for i in 0..4 {
                let extra = (g / 2 + i / 2) as u32;
                assert_eq!(member.get(g, i), (f.get(g, i) + extra) % 4);
            }
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in OffsetStrategy::ALL {
            assert_eq!(s.name().parse::<OffsetStrategy>().unwrap(), s);
        }
        assert!("nope".parse::<OffsetStrategy>().is_err());
    }

    #[test]
    fn array_set_rejects_mixed_shapes() {
        let a = ExponentArray::from_rows(q(4), &[vec![0, 1]]).unwrap();
        let b = ExponentArray::from_rows(q(4), &[vec![0], vec![1]]).unwrap();
        assert!(ArraySet::new(vec![a.clone(), b], vec![]).is_err());
        assert!(ArraySet::new(vec![], vec![]).is_err());
        assert!(ArraySet::new(vec![a], vec![vec![], vec![]]).is_err());
    }
}
