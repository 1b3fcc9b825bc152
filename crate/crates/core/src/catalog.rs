//! Parameter-feasibility catalog for 2-D GCAS constructions.
//!
//! Each [`Source`] is a closed-form family `(set size, L1, L2)` with a phase
//! constraint on `q`. The catalog enumerates every parameter witness inside
//! a set of bounds. Only the two EGBF constructions implemented by this
//! crate (`Th1`, `Th2`, plus the `Ref18a` head-offset variant) can actually
//! be built; the other rows are formula level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::digits::{gcd, lcm};

/// A construction family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    /// `(N^{k+1}, b^m, b^n)`, `lcm(N, b) | q`.
    Th1,
    /// `(N1^{k1+1} N2^{k2}, b1^m, b2^n)`, `σ | q`.
    Th2,
    /// `(2^k, 2^{m1}, 2^{m2})` from 2-D GBFs, even `q`.
    Ref11,
    /// `(N^k, N^m, N^n)` from seed PU matrices, `q = N`.
    Ref16,
    /// `(p1^{k1} p2^{k2}, p1^{m1}, p2^{m2})` from 2-D MVFs.
    Ref17a,
    /// `(p^k, p^{m1}, p^{m2})` from 2-D MVFs.
    Ref17b,
    /// `(N^k, b^m, b^n)`, head offsets only.
    Ref18a,
    /// `(N1^{k1} N2^{k2}, b1^m, b2^n)`.
    Ref18b,
    /// `(N^k, b^m, b^{n-1} + η1)`, truncated columns.
    Ref12a,
    /// `(N1^{k1} N2^{k2}, b1^m, b2^{n-1} + η2)`, truncated columns.
    Ref12b,
}

impl Source {
    pub const ALL: [Source; 10] = [
        Self::Th1,
        Self::Th2,
        Self::Ref11,
        Self::Ref16,
        Self::Ref17a,
        Self::Ref17b,
        Self::Ref18a,
        Self::Ref18b,
        Self::Ref12a,
        Self::Ref12b,
    ];

    pub fn is_proposed(self) -> bool {
        matches!(self, Self::Th1 | Self::Th2)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Enumeration limits. A zero bound admits nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogBounds {
    #[serde(alias = "max_L1")]
    pub max_l1: u64,
    #[serde(alias = "max_L2")]
    pub max_l2: u64,
    pub max_set_size: u64,
    pub max_q: u32,
}

impl Default for CatalogBounds {
    fn default() -> Self {
        Self { max_l1: 8, max_l2: 8, max_set_size: 81, max_q: 12 }
    }
}

/// Named parameter values, in a fixed per-source order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Witness(Vec<(&'static str, u64)>);

impl Witness {
    pub fn get(&self, name: &str) -> Option<u64> {
        self.0.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (k, v)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_char(' ')?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRow {
    pub source: Source,
    pub set_size: u64,
    pub l1: u64,
    pub l2: u64,
    pub q: u32,
    /// Divisibility condition on `q`, e.g. `"lcm(N,b) | q"`.
    pub q_constraint: &'static str,
    pub witness: Witness,
    /// Set for truncated-column rows that sit on the edge of the exponent
    /// range (`φ = n - k2`).
    pub boundary: bool,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `base^exp` if it is at most `limit`.
fn pow_within(base: u64, exp: u64, limit: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > limit {
            return None;
        }
    }
    (acc <= limit).then_some(acc)
}

/// Largest `e` with `base^e <= limit` (`base >= 2`).
fn max_exp(base: u64, limit: u64) -> u64 {
    let mut e = 0;
    let mut acc = 1u64;
    while let Some(next) = acc.checked_mul(base).filter(|&v| v <= limit) {
        acc = next;
        e += 1;
    }
    e
}

/// Multiples of `step` in `[2, max_q]`.
fn phases(step: u64, max_q: u32) -> impl Iterator<Item = u32> {
    let step = step.max(1);
    (1..).map(move |t| t * step).skip_while(|&q| q < 2).take_while(move |&q| q <= max_q as u64).map(|q| q as u32)
}

struct Emitter<'a> {
    bounds: &'a CatalogBounds,
    rows: Vec<CatalogRow>,
}

impl Emitter<'_> {
    #[allow(clippy::too_many_arguments)]
    fn emit(
        &mut self,
        source: Source,
        set_size: Option<u64>,
        l1: u64,
        l2: u64,
        q_step: u64,
        q_constraint: &'static str,
        witness: Vec<(&'static str, u64)>,
        boundary: bool,
    ) {
        let Some(set_size) = set_size.filter(|&s| s <= self.bounds.max_set_size) else {
            return;
        };
        if l1 == 0 || l2 == 0 || l1 > self.bounds.max_l1 || l2 > self.bounds.max_l2 {
            return;
        }
        for q in phases(q_step, self.bounds.max_q) {
            self.rows.push(CatalogRow {
                source,
                set_size,
                l1,
                l2,
                q,
                q_constraint,
                witness: Witness(witness.clone()),
                boundary,
            });
        }
    }
}

/// Every row of `source` inside `bounds`, sorted by `(L1, L2, set size)`.
pub fn enumerate_feasible(source: Source, bounds: &CatalogBounds) -> Vec<CatalogRow> {
    let mut e = Emitter { bounds, rows: Vec::new() };
    let b = *bounds;
    if b.max_l1 == 0 || b.max_l2 == 0 || b.max_set_size == 0 || b.max_q < 2 {
        return Vec::new();
    }
    let max_q = b.max_q as u64;
    let cap = b.max_set_size;
    match source {
        Source::Th1 | Source::Ref18a | Source::Ref12a => {
            for base in 2..=max_q {
                for big_n in base..=max_q {
                    let step = lcm(big_n, base);
                    if step > max_q {
                        continue;
                    }
                    for m in 1..=max_exp(base, b.max_l1) {
                        let l1 = base.pow(m as u32);
                        for n in 0..=max_exp(base, b.max_l2.saturating_mul(base)) {
                            for k in 1..=(m + n) {
                                let witness = |extra: Option<u64>| {
                                    let mut w = vec![("N", big_n), ("b", base), ("m", m), ("n", n), ("k", k)];
                                    if let Some(eta) = extra {
                                        w.push(("eta", eta));
                                    }
                                    w
                                };
                                match source {
                                    Source::Th1 => e.emit(
                                        source,
                                        pow_within(big_n, k + 1, cap),
                                        l1,
                                        base.pow(n as u32),
                                        step,
                                        "lcm(N,b) | q",
                                        witness(None),
                                        false,
                                    ),
                                    Source::Ref18a => e.emit(
                                        source,
                                        pow_within(big_n, k, cap),
                                        l1,
                                        base.pow(n as u32),
                                        step,
                                        "lcm(N,b) | q",
                                        witness(None),
                                        false,
                                    ),
                                    _ => {
                                        if n < 1 || k > n {
                                            continue;
                                        }
                                        for eta in eta1_values(base, n, k) {
                                            e.emit(
                                                source,
                                                pow_within(big_n, k, cap),
                                                l1,
                                                base.pow(n as u32 - 1) + eta,
                                                step,
                                                "lcm(N,b) | q",
                                                witness(Some(eta)),
                                                false,
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Source::Th2 | Source::Ref18b | Source::Ref12b => {
            for b1 in 2..=max_q {
                for b2 in 2..=max_q {
                    for n1 in b1..=max_q {
                        for n2 in b2..=max_q {
                            let sigma = lcm(lcm(n1, n2), lcm(b1, b2));
                            if sigma > max_q {
                                continue;
                            }
                            for m in 1..=max_exp(b1, b.max_l1) {
                                for n in 1..=max_exp(b2, b.max_l2.saturating_mul(b2)) {
                                    for k1 in 1..=m {
                                        for k2 in 1..=n {
                                            let w = |extra: &[(&'static str, u64)]| {
                                                let mut w = vec![
                                                    ("N1", n1),
                                                    ("N2", n2),
                                                    ("b1", b1),
                                                    ("b2", b2),
                                                    ("m", m),
                                                    ("n", n),
                                                    ("k1", k1),
                                                    ("k2", k2),
                                                ];
                                                w.extend_from_slice(extra);
                                                w
                                            };
                                            let l1 = b1.pow(m as u32);
                                            let size = |extra_k1: u64| {
                                                let a = pow_within(n1, k1 + extra_k1, cap)?;
                                                let c = pow_within(n2, k2, cap)?;
                                                a.checked_mul(c)
                                            };
                                            match source {
                                                Source::Th2 => e.emit(
                                                    source,
                                                    size(1),
                                                    l1,
                                                    b2.pow(n as u32),
                                                    sigma,
                                                    "σ | q",
                                                    w(&[]),
                                                    false,
                                                ),
                                                Source::Ref18b => e.emit(
                                                    source,
                                                    size(0),
                                                    l1,
                                                    b2.pow(n as u32),
                                                    sigma,
                                                    "σ | q",
                                                    w(&[]),
                                                    false,
                                                ),
                                                _ => {
                                                    for (eta, phi) in eta2_values(b2, n, k2) {
                                                        e.emit(
                                                            source,
                                                            size(0),
                                                            l1,
                                                            b2.pow(n as u32 - 1) + eta,
                                                            sigma,
                                                            "σ | q",
                                                            w(&[("eta", eta), ("phi", phi)]),
                                                            phi == n - k2,
                                                        );
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Source::Ref11 => {
            let step = 2;
            for m1 in 0..=max_exp(2, b.max_l1) {
                for m2 in 0..=max_exp(2, b.max_l2) {
                    for k in 1..=(m1 + m2) {
                        e.emit(
                            source,
                            pow_within(2, k, cap),
                            1 << m1,
                            1 << m2,
                            step,
                            "q even",
                            vec![("k", k), ("m1", m1), ("m2", m2)],
                            false,
                        );
                    }
                }
            }
        }
        Source::Ref16 => {
            for big_n in 2..=max_q {
                for m in 1..=max_exp(big_n, b.max_l1) {
                    for n in 1..=max_exp(big_n, b.max_l2) {
                        for k in 1..=(m + n) {
                            let (l1, l2) = (big_n.pow(m as u32), big_n.pow(n as u32));
                            let before = e.rows.len();
                            e.emit(
                                source,
                                pow_within(big_n, k, cap),
                                l1,
                                l2,
                                big_n,
                                "q = N",
                                vec![("N", big_n), ("m", m), ("n", n), ("k", k)],
                                false,
                            );
                            // q = N exactly, not every multiple.
                            let rows = e.rows.split_off(before);
                            e.rows.extend(rows.into_iter().filter(|r| r.q as u64 == big_n));
                        }
                    }
                }
            }
        }
        Source::Ref17a => {
            for p1 in (2..=max_q).filter(|&p| is_prime(p)) {
                for p2 in (2..=max_q).filter(|&p| is_prime(p)) {
                    let step = lcm(p1, p2);
                    if step > max_q {
                        continue;
                    }
                    for m1 in 1..=max_exp(p1, b.max_l1) {
                        for m2 in 1..=max_exp(p2, b.max_l2) {
                            for k1 in 1..=m1 {
                                for k2 in 1..=m2 {
                                    let size = pow_within(p1, k1, cap)
                                        .zip(pow_within(p2, k2, cap))
                                        .and_then(|(a, c)| a.checked_mul(c));
                                    e.emit(
                                        source,
                                        size,
                                        p1.pow(m1 as u32),
                                        p2.pow(m2 as u32),
                                        step,
                                        "lcm(p1,p2) | q",
                                        vec![("p1", p1), ("p2", p2), ("m1", m1), ("m2", m2), ("k1", k1), ("k2", k2)],
                                        false,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        Source::Ref17b => {
            for p in (2..=max_q).filter(|&p| is_prime(p)) {
                for m1 in 0..=max_exp(p, b.max_l1) {
                    for m2 in 0..=max_exp(p, b.max_l2) {
                        for k in 1..=(m1 + m2) {
                            e.emit(
                                source,
                                pow_within(p, k, cap),
                                p.pow(m1 as u32),
                                p.pow(m2 as u32),
                                p,
                                "p | q",
                                vec![("p", p), ("m1", m1), ("m2", m2), ("k", k)],
                                false,
                            );
                        }
                    }
                }
            }
        }
    }
    let mut rows = e.rows;
    rows.sort_by(|a, b| {
        (a.l1, a.l2, a.set_size, a.q, &a.witness).cmp(&(b.l1, b.l2, b.set_size, b.q, &b.witness))
    });
    rows.dedup();
    rows
}

/// Distinct `η1 = Σ_{α=1}^{k-1} r_α b^{n-k+α-1} + r_0 b^{n-k}`, `r ∈ Z_b`.
fn eta1_values(b: u64, n: u64, k: u64) -> BTreeSet<u64> {
    let mut exps: Vec<u64> = (1..k).map(|a| n - k + a - 1).collect();
    exps.push(n - k);
    digit_sums(b, &exps)
}

/// Distinct `(η2, φ)` with `η2 = Σ_{α=1}^{k2-1} r_α b2^{n-k2+α-1} + r_0 b2^φ`
/// for `0 <= φ <= n - k2`, reading the column ordering as the identity.
fn eta2_values(b2: u64, n: u64, k2: u64) -> Vec<(u64, u64)> {
    let mut out = BTreeSet::new();
    for phi in 0..=(n - k2) {
        let mut exps: Vec<u64> = (1..k2).map(|a| n - k2 + a - 1).collect();
        exps.push(phi);
        for eta in digit_sums(b2, &exps) {
            out.insert((eta, phi));
        }
    }
    out.into_iter().collect()
}

fn digit_sums(b: u64, exps: &[u64]) -> BTreeSet<u64> {
    let mut sums = BTreeSet::from([0u64]);
    for &e in exps {
        let w = b.pow(e as u32);
        sums = sums.iter().flat_map(|&s| (0..b).map(move |r| s + r * w)).collect();
    }
    sums
}

/// How rows from the two sides are matched in [`compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareKey {
    /// `(L1, L2, q)` only.
    Shape,
    /// `(L1, L2, q)` and the full witness, i.e. identical generator parameters.
    Conditions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub l1: u64,
    pub l2: u64,
    pub q: u32,
    /// Witness shared by both sides, empty under [`CompareKey::Shape`].
    pub conditions: String,
    pub sources_a: Vec<Source>,
    pub sources_b: Vec<Source>,
    pub max_a: u64,
    pub max_b: u64,
    pub ratio: f64,
    /// Side A includes a proposed construction and strictly beats side B.
    pub highlight: bool,
}

type GroupKey = (u64, u64, u32, String);

fn group(rows: &[CatalogRow], key: CompareKey) -> BTreeMap<GroupKey, (u64, BTreeSet<Source>)> {
    let mut out: BTreeMap<GroupKey, (u64, BTreeSet<Source>)> = BTreeMap::new();
    for r in rows {
        let cond = match key {
            CompareKey::Shape => String::new(),
            CompareKey::Conditions => r.witness.to_string(),
        };
        let slot = out.entry((r.l1, r.l2, r.q, cond)).or_default();
        slot.0 = slot.0.max(r.set_size);
        slot.1.insert(r.source);
    }
    out
}

/// Maximum set sizes per key present on both sides, with the ratio A/B.
pub fn compare(rows_a: &[CatalogRow], rows_b: &[CatalogRow], key: CompareKey) -> Vec<ComparisonRow> {
    let a = group(rows_a, key);
    let b = group(rows_b, key);
    a.into_iter()
        .filter_map(|(k, (max_a, src_a))| {
            let (max_b, src_b) = b.get(&k)?;
            let (l1, l2, q, conditions) = k;
            Some(ComparisonRow {
                l1,
                l2,
                q,
                conditions,
                highlight: max_a > *max_b && src_a.iter().any(|s| s.is_proposed()),
                sources_a: src_a.into_iter().collect(),
                sources_b: src_b.iter().copied().collect(),
                ratio: max_a as f64 / *max_b as f64,
                max_a,
                max_b: *max_b,
            })
        })
        .collect()
}

fn join_sources(s: &[Source]) -> String {
    s.iter().map(Source::to_string).collect::<Vec<_>>().join("+")
}

/// Aligned text table; highlighted rows end in `*`.
pub fn render_comparison(rows: &[ComparisonRow]) -> String {
    let header = ["L1", "L2", "q", "conditions", "A", "size A", "B", "size B", "ratio"];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        cells.push(vec![
            r.l1.to_string(),
            r.l2.to_string(),
            r.q.to_string(),
            if r.conditions.is_empty() { "-".into() } else { r.conditions.clone() },
            join_sources(&r.sources_a),
            r.max_a.to_string(),
            join_sources(&r.sources_b),
            r.max_b.to_string(),
            format!("{:.2}{}", r.ratio, if r.highlight { " *" } else { "" }),
        ]);
    }
    let widths: Vec<usize> =
        (0..header.len()).map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> =
            row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}", w = *w)).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// CSV export with header `source,set_size,L1,L2,q,witness`.
pub fn to_csv(rows: &[CatalogRow]) -> String {
    let mut out = String::from("source,set_size,L1,L2,q,witness\n");
    for r in rows {
        let boundary = if r.boundary { " boundary" } else { "" };
        let _ = writeln!(out, "{},{},{},{},{},{}{boundary}", r.source, r.set_size, r.l1, r.l2, r.q, r.witness);
    }
    out
}

/// `gcd`-based check used by tests and callers that hold a witness.
pub fn divides(a: u64, b: u64) -> bool {
    a != 0 && gcd(a, b) == a
}
