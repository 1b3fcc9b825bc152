//! Command-line front end. Every command is a plain function returning an
//! exit code so it can be driven from tests without spawning a process.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::{self, CatalogBounds, CompareKey, Source};
use crate::construct::{build_t1_set, example1_params, ArraySet, OffsetStrategy};
use crate::document::{ArraySetDocument, Params, ParamsDocument};
use crate::error::GcasError;
use crate::sweep::{run_sweep, SweepBounds};
use crate::verify::{all_shifts, check_gcas};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_GCAS: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gcas", version, about = "Build and verify 2-D Golay complementary array sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an array set from a parameter file.
    Gen {
        params: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Offset strategy for two-alphabet parameters; overrides the file.
        #[arg(long)]
        strategy: Option<OffsetStrategy>,
    },
    /// Check whether an array set (JSON) is complementary.
    Verify { set: PathBuf },
    /// Print the worked single-alphabet example and its verdict.
    Example1,
    /// Randomized sweep over both constructions.
    Sweep {
        /// JSON bounds; defaults cover the documented desk bounds.
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Report file. Without it the CSV goes to stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Autocorrelation sum at every shift, as CSV.
    AacfDump {
        set: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compare achievable set sizes across constructions.
    Compare {
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Write the full feasibility catalog as CSV.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Terminal failure of a command: message plus exit code.
struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl From<GcasError> for Failure {
    fn from(e: GcasError) -> Self {
        let code = match &e {
            GcasError::Io(_) | GcasError::Parse(_) => EXIT_IO,
            GcasError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        let lines = match e {
            GcasError::InvalidParams(v) => v,
            other => vec![other.to_string()],
        };
        Failure { code, lines }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        GcasError::Io(e).into()
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_IO, lines: vec![format!("{}: {e}", path.display())] }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure { code: EXIT_IO, lines: vec![format!("{}: {e}", path.display())] })
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => out.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

fn load_set(path: &Path) -> Result<ArraySet, Failure> {
    let doc: ArraySetDocument = parse_json(path)?;
    ArraySet::try_from(&doc).map_err(|e| Failure { code: EXIT_IO, lines: vec![e.to_string()] })
}

fn gen(
    params: &Path,
    output: Option<&Path>,
    format: Format,
    strategy: Option<OffsetStrategy>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let doc: ParamsDocument = parse_json(params)?;
    let mut params = doc.to_params().map_err(|lines| Failure { code: EXIT_INVALID, lines })?;
    if let (Params::T2(p), Some(s)) = (&mut params, strategy) {
        p.strategy = s;
    }
    params.validate().map_err(|lines| Failure { code: EXIT_INVALID, lines })?;
    let set = params.build()?;
    let dups = set.duplicate_count();
    if dups > 0 {
        log::warn!("{dups} of {} generated members repeat an earlier member", set.len());
    }
    let doc = ArraySetDocument::from(&set);
    let text = match format {
        Format::Json => doc.to_json() + "\n",
        Format::Csv => doc.to_csv(),
    };
    emit(output, &text, out)?;
    Ok(EXIT_OK)
}

fn verify(set: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let set = load_set(set)?;
    let report = check_gcas(&set)?;
    writeln!(out, "{report}")?;
    Ok(if report.is_gcas { EXIT_OK } else { EXIT_NOT_GCAS })
}

fn example1(out: &mut dyn Write) -> Result<i32, Failure> {
    let params = example1_params();
    let set = build_t1_set(&params)?;
    writeln!(out, "q=6 b=2 m=1 n=3 N=3 partition=(4,1,2,3)")?;
    for (member, label) in set.members().iter().zip(set.labels()) {
        let label: Vec<String> = label.iter().map(u32::to_string).collect();
        writeln!(out, "C[{}]", label.join(","))?;
        for row in member.display_rows() {
            writeln!(out, "{row}")?;
        }
    }
    let report = check_gcas(&set)?;
    writeln!(out, "{report}")?;
    Ok(if report.is_gcas { EXIT_OK } else { EXIT_NOT_GCAS })
}

fn sweep(bounds: Option<&Path>, output: Option<&Path>, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let bounds: SweepBounds = match bounds {
        Some(p) => parse_json(p)?,
        None => SweepBounds::default(),
    };
    let report = run_sweep(&bounds);
    if report.records.is_empty() {
        writeln!(err, "warning: the bounds admit no parameter tuples")?;
    }
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => serde_json::to_string_pretty(&report).map_err(|e| GcasError::Internal(e.to_string()))? + "\n",
    };
    emit(output, &text, out)?;
    let summary = report.summary();
    if output.is_some() {
        out.write_all(summary.as_bytes())?;
    } else {
        err.write_all(summary.as_bytes())?;
    }
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_NOT_GCAS })
}

fn fmt_float(v: f64) -> String {
    // Rounding hides summation noise; the "+ 0.0" turns -0.0 into 0.0.
    let v = (v * 1e12).round() / 1e12 + 0.0;
    format!("{v:?}")
}

fn aacf_dump(set: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let set = load_set(set)?;
    let (rows, cols) = set.shape();
    let mut text = String::from("u1,u2,re,im,exact_zero\n");
    for s in all_shifts(rows, cols) {
        let v = crate::verify::aacf_set_sum(&set, s)?;
        let z = v.to_complex();
        text.push_str(&format!("{},{},{},{},{}\n", s.u1, s.u2, fmt_float(z.0), fmt_float(z.1), v.is_zero() as u8));
    }
    emit(output, &text, out)?;
    Ok(EXIT_OK)
}

fn compare(bounds: Option<&Path>, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let bounds: CatalogBounds = match bounds {
        Some(p) => parse_json(p)?,
        None => CatalogBounds::default(),
    };
    let rows = |s| catalog::enumerate_feasible(s, &bounds);
    let pairs = [(Source::Th1, Source::Ref18a), (Source::Th2, Source::Ref18b)];
    for (a, b) in pairs {
        writeln!(out, "{a} vs {b} (same generator parameters)")?;
        let table = catalog::compare(&rows(a), &rows(b), CompareKey::Conditions);
        out.write_all(catalog::render_comparison(&table).as_bytes())?;
        writeln!(out)?;
    }
    let (proposed, prior): (Vec<_>, Vec<_>) =
        Source::ALL.iter().flat_map(|&s| rows(s)).partition(|r| r.source.is_proposed());
    writeln!(out, "proposed vs all prior families (largest set per L1, L2, q)")?;
    let table = catalog::compare(&proposed, &prior, CompareKey::Shape);
    out.write_all(catalog::render_comparison(&table).as_bytes())?;
    let wins = table.iter().filter(|r| r.highlight).count();
    writeln!(out, "{wins} of {} shapes where a proposed construction is strictly larger", table.len())?;
    if let Some(path) = output {
        let mut all = proposed;
        all.extend(prior);
        emit(Some(path), &catalog::to_csv(&all), out)?;
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_IO } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Gen { params, output, format, strategy } => gen(&params, output.as_deref(), format, strategy, out),
        Command::Verify { set } => verify(&set, out),
        Command::Example1 => example1(out),
        Command::Sweep { bounds, output, format } => sweep(bounds.as_deref(), output.as_deref(), format, out, err),
        Command::AacfDump { set, output } => aacf_dump(&set, output.as_deref(), out),
        Command::Compare { bounds, output } => compare(bounds.as_deref(), output.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            for line in f.lines {
                let _ = writeln!(err, "{line}");
            }
            f.code
        }
    }
}
