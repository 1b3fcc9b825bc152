//! Randomized parameter sweeps over both constructions.
//!
//! A sweep enumerates every admissible parameter tuple inside
//! [`SweepBounds`], draws random EGBFs for each one, builds the set and
//! checks it with the exact verifier. Draws are reproducible: every case
//! uses its own ChaCha stream keyed by the case index.

use std::fmt::{self, Write as _};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construct::{OffsetStrategy, Theorem1Params, Theorem2Params};
use crate::digits::{checked_pow, is_unit, Modulus};
use crate::document::Params;
use crate::egbf::{Theorem1Function, Theorem2Function};
use crate::verify::check_gcas;

/// Uniform ordered partition of `1..=total` into `parts` nonempty chains.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, total: usize, parts: usize) -> Vec<Vec<usize>> {
    assert!(parts >= 1 && parts <= total, "need 1 <= parts <= total");
    let mut vars: Vec<usize> = (1..=total).collect();
    vars.shuffle(rng);
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, total - 1, parts - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(vars[start..c].to_vec());
        start = c;
    }
    out
}

fn random_units<R: Rng + ?Sized>(rng: &mut R, b: u32, partitions: &[Vec<usize>]) -> Vec<Vec<u32>> {
    let units: Vec<u32> = (1..b).filter(|&r| is_unit(r, b)).collect();
    partitions
        .iter()
        .map(|p| (1..p.len()).map(|_| *units.choose(rng).expect("Z_b has a unit")).collect())
        .collect()
}

/// `q - 1` power rows of `width` coefficients in `Z_q`.
fn random_powers<R: Rng + ?Sized>(rng: &mut R, q: u32, width: usize) -> Vec<Vec<u32>> {
    (1..q).map(|_| (0..width).map(|_| rng.gen_range(0..q)).collect()).collect()
}

/// Random single-alphabet EGBF with `k` chains.
pub fn random_t1_function<R: Rng + ?Sized>(rng: &mut R, q: Modulus, b: u32, m: usize, n: usize, k: usize) -> Theorem1Function {
    let partitions = random_partition(rng, m + n, k);
    let d = random_units(rng, b, &partitions);
    let lambda = random_powers(rng, q.get(), m + n);
    let lambda0 = rng.gen_range(0..q.get());
    Theorem1Function { q, b, m, n, partitions, d, lambda, lambda0 }
}

/// Random two-alphabet EGBF with `k1` row chains and `k2` column chains.
#[allow(clippy::too_many_arguments)]
pub fn random_t2_function<R: Rng + ?Sized>(
    rng: &mut R,
    q: Modulus,
    (b1, m, k1): (u32, usize, usize),
    (b2, n, k2): (u32, usize, usize),
) -> Theorem2Function {
    let x_partitions = random_partition(rng, m, k1);
    let y_partitions = random_partition(rng, n, k2);
    let d = random_units(rng, b1, &x_partitions);
    let d_prime = random_units(rng, b2, &y_partitions);
    let lambda = random_powers(rng, q.get(), m);
    let nu = random_powers(rng, q.get(), n);
    let lambda0 = rng.gen_range(0..q.get());
    Theorem2Function { q, b1, b2, m, n, x_partitions, y_partitions, d, d_prime, lambda, nu, lambda0 }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct T1Bounds {
    pub bases: Vec<u32>,
    pub moduli: Vec<u32>,
    /// Upper bound on `m + n`.
    pub max_vars: usize,
    /// Upper bound on `b^{m+n}`.
    pub max_entries: u64,
    /// Upper bound on `N^{k+1}`.
    pub max_set_size: u64,
    pub draws: usize,
}

impl Default for T1Bounds {
    fn default() -> Self {
        Self { bases: vec![2, 3], moduli: vec![2, 3, 4, 6, 12], max_vars: 5, max_entries: 256, max_set_size: 256, draws: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct T2Bounds {
    pub bases: Vec<u32>,
    pub moduli: Vec<u32>,
    pub max_m: usize,
    pub max_n: usize,
    /// Upper bound on `N1^{k1+1} N2^{k2}`.
    pub max_set_size: u64,
    pub draws: usize,
    pub strategies: Vec<OffsetStrategy>,
}

impl Default for T2Bounds {
    fn default() -> Self {
        Self {
            bases: vec![2, 3],
            moduli: vec![4, 6, 12],
            max_m: 3,
            max_n: 3,
            max_set_size: 512,
            draws: 2,
            strategies: OffsetStrategy::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepBounds {
    pub seed: u64,
    pub t1: T1Bounds,
    pub t2: T2Bounds,
}

impl Default for SweepBounds {
    fn default() -> Self {
        Self { seed: 0x6c_61_73_31, t1: T1Bounds::default(), t2: T2Bounds::default() }
    }
}

/// One admissible parameter tuple. Single-alphabet cases leave the
/// column-side fields empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCase {
    pub theorem: Theorem,
    pub q: u32,
    pub b1: u32,
    pub b2: Option<u32>,
    pub n1: u32,
    pub n2: Option<u32>,
    pub m: usize,
    pub n: usize,
    pub k1: usize,
    pub k2: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    T1,
    T2,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T1 => "t1",
            Theorem::T2 => "t2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub case: SweepCase,
    pub draw: usize,
    pub strategy: Option<OffsetStrategy>,
    pub set_size: u64,
    pub verdict: Verdict,
    pub elapsed_ms: f64,
    /// Reason for `n/a` or `fail`.
    pub note: String,
    /// Full parameters, kept for failing draws only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<crate::document::ParamsDocument>,
}

/// Every single-alphabet tuple inside `bounds`, in a fixed order.
pub fn t1_cases(bounds: &T1Bounds) -> Vec<SweepCase> {
    let mut out = Vec::new();
    for &q in &bounds.moduli {
        for &b in &bounds.bases {
            if b < 2 || q % b != 0 {
                continue;
            }
            for big_n in (b..=q).filter(|n| q % n == 0) {
                for total in 1..=bounds.max_vars {
                    if !checked_pow(b as u64, total as u32).is_ok_and(|e| e <= bounds.max_entries) {
                        continue;
                    }
                    for m in 1..=total {
                        let n = total - m;
                        for k in 1..=total {
                            if !checked_pow(big_n as u64, k as u32 + 1).is_ok_and(|s| s <= bounds.max_set_size) {
                                continue;
                            }
                            out.push(SweepCase {
                                theorem: Theorem::T1,
                                q,
                                b1: b,
                                b2: None,
                                n1: big_n,
                                n2: None,
                                m,
                                n,
                                k1: k,
                                k2: None,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every two-alphabet tuple inside `bounds`, in a fixed order.
pub fn t2_cases(bounds: &T2Bounds) -> Vec<SweepCase> {
    let mut out = Vec::new();
    for &q in &bounds.moduli {
        for &b1 in &bounds.bases {
            for &b2 in &bounds.bases {
                if b1 < 2 || b2 < 2 || q % b1 != 0 || q % b2 != 0 {
                    continue;
                }
                for n1 in (b1..=q).filter(|n| q % n == 0) {
                    for n2 in (b2..=q).filter(|n| q % n == 0) {
                        for m in 1..=bounds.max_m {
                            for n in 1..=bounds.max_n {
                                for k1 in 1..=m {
                                    for k2 in 1..=n {
                                        let size = checked_pow(n1 as u64, k1 as u32 + 1)
                                            .and_then(|a| Ok(a.saturating_mul(checked_pow(n2 as u64, k2 as u32)?)));
                                        if !size.is_ok_and(|s| s <= bounds.max_set_size) {
                                            continue;
                                        }
                                        out.push(SweepCase {
                                            theorem: Theorem::T2,
                                            q,
                                            b1,
                                            b2: Some(b2),
                                            n1,
                                            n2: Some(n2),
                                            m,
                                            n,
                                            k1,
                                            k2: Some(k2),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn run_one(params: &Params) -> (u64, Verdict, String) {
    let size = params.set_size().unwrap_or(0);
    if let Err(v) = params.validate() {
        return (size, Verdict::NotApplicable, v.join("; "));
    }
    let outcome = params.build().and_then(|set| check_gcas(&set));
    match outcome {
        Ok(r) if r.is_gcas => (size, Verdict::Pass, String::new()),
        Ok(r) => (size, Verdict::Fail, format!("{} nonzero shifts", r.nonzero_shifts.len())),
        Err(e) => (size, Verdict::Fail, e.to_string()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub bounds: SweepBounds,
    pub records: Vec<SweepRecord>,
    pub elapsed_ms: f64,
}

/// Per-strategy counts for the two-alphabet cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StrategyTally {
    pub strategy: OffsetStrategy,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

impl StrategyTally {
    /// No applicable draw failed and at least one passed.
    pub fn passes_all_applicable(&self) -> bool {
        self.fail == 0 && self.pass > 0
    }
}

impl SweepReport {
    fn t1_records(&self) -> impl Iterator<Item = &SweepRecord> {
        self.records.iter().filter(|r| r.case.theorem == Theorem::T1)
    }

    pub fn t1_counts(&self) -> (usize, usize) {
        let pass = self.t1_records().filter(|r| r.verdict == Verdict::Pass).count();
        (pass, self.t1_records().count())
    }

    pub fn t1_pass_rate(&self) -> f64 {
        let (pass, total) = self.t1_counts();
        if total == 0 {
            1.0
        } else {
            pass as f64 / total as f64
        }
    }

    pub fn t2_tallies(&self) -> Vec<StrategyTally> {
        self.bounds
            .t2
            .strategies
            .iter()
            .map(|&s| {
                let recs: Vec<&SweepRecord> = self.records.iter().filter(|r| r.strategy == Some(s)).collect();
                let count = |v| recs.iter().filter(|r| r.verdict == v).count();
                StrategyTally {
                    strategy: s,
                    pass: count(Verdict::Pass),
                    fail: count(Verdict::Fail),
                    not_applicable: count(Verdict::NotApplicable),
                }
            })
            .collect()
    }

    /// Strategies with no failure and no inapplicable two-alphabet case.
    pub fn strategies_passing_every_case(&self) -> Vec<OffsetStrategy> {
        self.t2_tallies().into_iter().filter(|t| t.fail == 0 && t.not_applicable == 0).map(|t| t.strategy).collect()
    }

    /// Every single-alphabet draw passes and, when two-alphabet cases were
    /// swept, at least one strategy passes all of them.
    pub fn is_clean(&self) -> bool {
        let (pass, total) = self.t1_counts();
        let t2_swept = self.records.iter().any(|r| r.case.theorem == Theorem::T2);
        pass == total && (!t2_swept || !self.strategies_passing_every_case().is_empty())
    }

    pub fn summary(&self) -> String {
        let (pass, total) = self.t1_counts();
        let mut out = String::new();
        let _ = writeln!(out, "t1: {pass}/{total} draws pass ({:.1}%)", 100.0 * self.t1_pass_rate());
        for t in self.t2_tallies() {
            let _ = writeln!(
                out,
                "t2 {}: pass={} fail={} n/a={}{}",
                t.strategy,
                t.pass,
                t.fail,
                t.not_applicable,
                if t.passes_all_applicable() { " (passes every applicable tuple)" } else { "" }
            );
        }
        let every: Vec<String> = self.strategies_passing_every_case().iter().map(|s| s.to_string()).collect();
        if !every.is_empty() {
            let _ = writeln!(out, "t2 strategies passing every case: {}", every.join(", "));
        }
        let _ = writeln!(out, "elapsed: {:.1} s", self.elapsed_ms / 1000.0);
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theorem,q,b1,b2,N1,N2,m,n,k1,k2,draw,strategy,set_size,verdict,elapsed_ms,note\n");
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.records {
            let c = &r.case;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3},{}",
                c.theorem,
                c.q,
                c.b1,
                opt(c.b2.map(|v| v.to_string())),
                c.n1,
                opt(c.n2.map(|v| v.to_string())),
                c.m,
                c.n,
                c.k1,
                opt(c.k2.map(|v| v.to_string())),
                r.draw,
                opt(r.strategy.map(|s| s.to_string())),
                r.set_size,
                r.verdict,
                r.elapsed_ms,
                r.note.replace(',', ";"),
            );
        }
        out
    }
}

fn case_rng(seed: u64, theorem: Theorem, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((theorem == Theorem::T2) as u64) << 32 | index as u64);
    rng
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

/// Runs every case and draw inside `bounds`.
pub fn run_sweep(bounds: &SweepBounds) -> SweepReport {
    let start = Instant::now();
    let mut records = Vec::new();
    for (idx, case) in t1_cases(&bounds.t1).into_iter().enumerate() {
        let mut rng = case_rng(bounds.seed, Theorem::T1, idx);
        let q = Modulus::new(case.q).expect("sweep moduli are valid");
        for draw in 0..bounds.t1.draws {
            let t = Instant::now();
            let function = random_t1_function(&mut rng, q, case.b1, case.m, case.n, case.k1);
            let params = Params::T1(Theorem1Params { function, offset_order: case.n1 });
            let (set_size, verdict, note) = run_one(&params);
            if verdict == Verdict::Fail {
                log::warn!("t1 failure: {case:?} draw {draw}: {note}");
            }
            records.push(SweepRecord {
                case,
                draw,
                strategy: None,
                set_size,
                verdict,
                elapsed_ms: ms(t),
                params: (verdict == Verdict::Fail).then(|| crate::document::ParamsDocument::from_params(&params)),
                note,
            });
        }
        log::debug!("t1 case {idx} done");
    }
    for (idx, case) in t2_cases(&bounds.t2).into_iter().enumerate() {
        let mut rng = case_rng(bounds.seed, Theorem::T2, idx);
        let q = Modulus::new(case.q).expect("sweep moduli are valid");
        let (b2, n2, k2) = (case.b2.unwrap_or(2), case.n2.unwrap_or(2), case.k2.unwrap_or(1));
        for draw in 0..bounds.t2.draws {
            let function = random_t2_function(&mut rng, q, (case.b1, case.m, case.k1), (b2, case.n, k2));
            for &strategy in &bounds.t2.strategies {
                let t = Instant::now();
                let params = Params::T2(Theorem2Params {
                    function: function.clone(),
                    row_offset_order: case.n1,
                    col_offset_order: n2,
                    strategy,
                });
                let (set_size, verdict, note) = run_one(&params);
                records.push(SweepRecord {
                    case,
                    draw,
                    strategy: Some(strategy),
                    set_size,
                    verdict,
                    elapsed_ms: ms(t),
                    params: (verdict == Verdict::Fail).then(|| crate::document::ParamsDocument::from_params(&params)),
                    note,
                });
            }
        }
        log::debug!("t2 case {idx} done");
    }
    SweepReport { bounds: bounds.clone(), records, elapsed_ms: ms(start) }
}
