//! JSON and CSV interchange formats for parameters and array sets.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::construct::{ArraySet, OffsetStrategy, Theorem1Params, Theorem2Params};
use crate::digits::Modulus;
use crate::egbf::{ExponentArray, Theorem1Function, Theorem2Function};
use crate::error::{GcasError, Result};

/// Generator parameters as read from a `gen` input file.
///
/// Partitions use 1-based variable indices. `lambda[γ-1]` holds the
/// coefficients of the `γ`-th powers; omitted rows are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "lowercase")]
pub enum ParamsDocument {
    T1 {
        q: u32,
        b: u32,
        m: usize,
        n: usize,
        #[serde(rename = "N")]
        big_n: u32,
        k: usize,
        partitions: Vec<Vec<usize>>,
        d: Vec<Vec<u32>>,
        #[serde(default)]
        lambda: Vec<Vec<u32>>,
        #[serde(default)]
        lambda0: u32,
    },
    T2 {
        q: u32,
        b1: u32,
        b2: u32,
        m: usize,
        n: usize,
        #[serde(rename = "N1")]
        n1: u32,
        #[serde(rename = "N2")]
        n2: u32,
        k1: usize,
        k2: usize,
        x_partitions: Vec<Vec<usize>>,
        y_partitions: Vec<Vec<usize>>,
        d: Vec<Vec<u32>>,
        d_prime: Vec<Vec<u32>>,
        #[serde(default)]
        lambda: Vec<Vec<u32>>,
        #[serde(default)]
        nu: Vec<Vec<u32>>,
        #[serde(default)]
        lambda0: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        strategy: Option<OffsetStrategy>,
    },
}

/// Validated parameters for either construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Params {
    T1(Theorem1Params),
    T2(Theorem2Params),
}

impl Params {
    pub fn set_size(&self) -> Option<u64> {
        match self {
            Params::T1(p) => p.set_size(),
            Params::T2(p) => p.set_size(),
        }
    }

    /// All violated constraints, one message each.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        match self {
            Params::T1(p) => crate::construct::validate_t1(p),
            Params::T2(p) => crate::construct::validate_t2(p),
        }
    }

    pub fn build(&self) -> Result<ArraySet> {
        match self {
            Params::T1(p) => crate::construct::build_t1_set(p),
            Params::T2(p) => crate::construct::build_t2_set(p),
        }
    }
}

fn count_mismatch(name: &str, declared: usize, actual: usize, what: &str) -> Option<String> {
    (declared != actual).then(|| format!("{name} = {declared} but {actual} {what} given"))
}

impl ParamsDocument {
    /// Converts to typed parameters. Structural errors that prevent building
    /// the typed value (bad modulus, declared counts that disagree with the
    /// lists) come back as violation messages; everything else is left to
    /// [`Params::validate`].
    pub fn to_params(&self) -> std::result::Result<Params, Vec<String>> {
        let modulus = |q: u32| Modulus::new(q).map_err(|e| vec![e.to_string()]);
        match self {
            ParamsDocument::T1 { q, b, m, n, big_n, k, partitions, d, lambda, lambda0 } => {
                let q = modulus(*q)?;
                if let Some(msg) = count_mismatch("k", *k, partitions.len(), "partitions") {
                    return Err(vec![msg]);
                }
                Ok(Params::T1(Theorem1Params {
                    function: Theorem1Function {
                        q,
                        b: *b,
                        m: *m,
                        n: *n,
                        partitions: partitions.clone(),
                        d: d.clone(),
                        lambda: lambda.clone(),
                        lambda0: *lambda0,
                    },
                    offset_order: *big_n,
                }))
            }
            ParamsDocument::T2 {
                q,
                b1,
                b2,
                m,
                n,
                n1,
                n2,
                k1,
                k2,
                x_partitions,
                y_partitions,
                d,
                d_prime,
                lambda,
                nu,
                lambda0,
                strategy,
            } => {
                let q = modulus(*q)?;
                let msgs: Vec<String> = [
                    count_mismatch("k1", *k1, x_partitions.len(), "row partitions"),
                    count_mismatch("k2", *k2, y_partitions.len(), "column partitions"),
                ]
                .into_iter()
                .flatten()
                .collect();
                if !msgs.is_empty() {
                    return Err(msgs);
                }
                Ok(Params::T2(Theorem2Params {
                    function: Theorem2Function {
                        q,
                        b1: *b1,
                        b2: *b2,
                        m: *m,
                        n: *n,
                        x_partitions: x_partitions.clone(),
                        y_partitions: y_partitions.clone(),
                        d: d.clone(),
                        d_prime: d_prime.clone(),
                        lambda: lambda.clone(),
                        nu: nu.clone(),
                        lambda0: *lambda0,
                    },
                    row_offset_order: *n1,
                    col_offset_order: *n2,
                    strategy: strategy.unwrap_or_default(),
                }))
            }
        }
    }

    pub fn from_params(p: &Params) -> Self {
        match p {
            Params::T1(p) => {
                let f = &p.function;
                ParamsDocument::T1 {
                    q: f.q.get(),
                    b: f.b,
                    m: f.m,
                    n: f.n,
                    big_n: p.offset_order,
                    k: f.k(),
                    partitions: f.partitions.clone(),
                    d: f.d.clone(),
                    lambda: f.lambda.clone(),
                    lambda0: f.lambda0,
                }
            }
            Params::T2(p) => {
                let f = &p.function;
                ParamsDocument::T2 {
                    q: f.q.get(),
                    b1: f.b1,
                    b2: f.b2,
                    m: f.m,
                    n: f.n,
                    n1: p.row_offset_order,
                    n2: p.col_offset_order,
                    k1: f.k1(),
                    k2: f.k2(),
                    x_partitions: f.x_partitions.clone(),
                    y_partitions: f.y_partitions.clone(),
                    d: f.d.clone(),
                    d_prime: f.d_prime.clone(),
                    lambda: f.lambda.clone(),
                    nu: f.nu.clone(),
                    lambda0: f.lambda0,
                    strategy: Some(p.strategy),
                }
            }
        }
    }
}

/// Serialized array set. `members[j][g][i]` is the exponent at `(g, i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArraySetDocument {
    pub q: u32,
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<Vec<u32>>,
    pub members: Vec<Vec<Vec<u32>>>,
}

impl From<&ArraySet> for ArraySetDocument {
    fn from(set: &ArraySet) -> Self {
        let (rows, cols) = set.shape();
        Self {
            q: set.modulus().get(),
            rows,
            cols,
            labels: set.labels().to_vec(),
            members: set.members().iter().map(ExponentArray::to_rows).collect(),
        }
    }
}

impl TryFrom<&ArraySetDocument> for ArraySet {
    type Error = GcasError;

    fn try_from(doc: &ArraySetDocument) -> Result<Self> {
        let q = Modulus::new(doc.q)?;
        let mut members = Vec::with_capacity(doc.members.len());
        for (j, m) in doc.members.iter().enumerate() {
            if m.len() != doc.rows || m.iter().any(|r| r.len() != doc.cols) {
                return Err(GcasError::Parse(format!(
                    "member {j} is not {}x{}",
                    doc.rows, doc.cols
                )));
            }
            members.push(ExponentArray::from_rows(q, m)?);
        }
        ArraySet::new(members, doc.labels.clone())
    }
}

impl ArraySetDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GcasError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("array set serializes")
    }

    /// `q,rows,cols` header and values, then one row-major line per member.
    pub fn to_csv(&self) -> String {
        let mut out = format!("q,rows,cols\n{},{},{}\n", self.q, self.rows, self.cols);
        for m in &self.members {
            let flat: Vec<String> = m.iter().flatten().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", flat.join(","));
        }
        out
    }

    /// Inverse of [`to_csv`](Self::to_csv). Labels are not carried by CSV.
    pub fn from_csv(text: &str) -> Result<Self> {
        let parse_err = |msg: String| GcasError::Parse(msg);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("q,rows,cols") {
            return Err(parse_err("expected header 'q,rows,cols'".into()));
        }
        let dims = lines.next().ok_or_else(|| parse_err("missing dimensions line".into()))?;
        let dims: Vec<usize> = dims
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| parse_err(format!("dimensions: {e}"))))
            .collect::<Result<_>>()?;
        let [q, rows, cols] = dims[..] else {
            return Err(parse_err("dimensions line needs 3 values".into()));
        };
        let mut members = Vec::new();
        for (j, line) in lines.enumerate() {
            let flat: Vec<u32> = line
                .split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|e| parse_err(format!("member {j}: {e}"))))
                .collect::<Result<_>>()?;
            if cols == 0 || flat.len() != rows * cols {
                return Err(parse_err(format!("member {j}: expected {} values, got {}", rows * cols, flat.len())));
            }
            members.push(flat.chunks(cols).map(<[u32]>::to_vec).collect());
        }
        Ok(Self { q: q as u32, rows, cols, labels: Vec::new(), members })
    }
}
