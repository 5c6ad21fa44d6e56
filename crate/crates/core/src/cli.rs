//! The `odesym` command-line front end.
//!
//! Exit codes: 0 success, 1 a symmetry/expectation check failed, 2 input
//! error (syntax, malformed corpus), 3 degenerate equation.

use std::fs;
use std::io::{self, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detsys::{solve_symmetries, verify, DetsysError};
use crate::exprcore::Monomial;
use crate::jet::PointField;
use crate::liealg::{bracket, closure, fields_span_equal, LieError};
use crate::parse::{parse_field, parse_ode, OdeInput, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

/// Dimensions a second-order point symmetry algebra can have.
pub const THEOREM_DIMS: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 8];

pub const DEFAULT_DEGREE: u32 = 4;

const TRUNCATION_NOTE: &str =
    "dimensions count polynomial symmetries up to each entry's degree bound; \
they are lower bounds, and the set check is a property of this corpus, not a proof";

#[derive(Parser, Debug)]
#[command(
    name = "odesym",
    version,
    about = "Lie point symmetries of implicit polynomial ODEs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute polynomial point symmetries up to a degree bound.
    Symmetries {
        #[arg(allow_hyphen_values = true)]
        ode: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        deg: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check whether a field `xi, eta` is a point symmetry.
    Verify {
        #[arg(allow_hyphen_values = true)]
        ode: String,
        #[arg(long, allow_hyphen_values = true)]
        field: String,
    },
    /// Commutator of two point fields.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Run a JSON Lines corpus and check its expectations.
    Audit {
        corpus: PathBuf,
        #[arg(long, default_value = "1")]
        jobs: NonZeroUsize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Detsys(#[from] DetsysError),
    #[error("{0}")]
    Lie(#[from] LieError),
    #[error("corpus line {line}: {msg}")]
    Corpus { line: usize, msg: String },
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(e) if e.is_degenerate() => EXIT_DEGENERATE,
            CliError::Parse(_) | CliError::Corpus { .. } | CliError::Io(_) => EXIT_INPUT,
            CliError::Detsys(_) | CliError::Lie(_) => EXIT_FAILED,
        }
    }
}

/// Computed symmetry data for one equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub ode: String,
    pub degree: u32,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub closed: bool,
    pub killing_rank: Option<usize>,
    pub derived_dims: Vec<usize>,
    pub order: u8,
    /// Canonical `F` with the equation read as `F = 0`.
    pub f: String,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub fields: Vec<PointField>,
}

/// Warnings about the reduction modulo `F` for this equation.
pub fn reduction_warnings(ode: &OdeInput) -> Vec<String> {
    let content = ode.f.monomial_content();
    if content == Monomial::one() {
        return Vec::new();
    }
    vec![format!(
        "F has the monomial factor {content}; results are symmetries of the ideal (F) away from the zero set of the leading coefficient"
    )]
}

pub fn analyze(ode_text: &str, degree: u32) -> Result<SymmetryReport, CliError> {
    let ode = parse_ode(ode_text)?;
    analyze_ode(ode_text, &ode, degree)
}

fn analyze_ode(ode_text: &str, ode: &OdeInput, degree: u32) -> Result<SymmetryReport, CliError> {
    let fields = solve_symmetries(ode, degree)?;
    let alg = closure(&fields)?;
    Ok(SymmetryReport {
        ode: ode_text.to_string(),
        degree,
        dimension: fields.len(),
        basis: fields.iter().map(ToString::to_string).collect(),
        closed: alg.closed,
        killing_rank: alg.killing_rank,
        derived_dims: alg.derived_dims,
        order: ode.order,
        f: ode.f.to_string(),
        warnings: reduction_warnings(ode),
        fields,
    })
}

fn write_symmetry_text(r: &SymmetryReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "equation: {} = 0", r.f)?;
    writeln!(out, "order: {}", r.order)?;
    writeln!(out, "degree bound: {}", r.degree)?;
    writeln!(out, "dimension: {}", r.dimension)?;
    writeln!(out, "basis:")?;
    for (i, b) in r.basis.iter().enumerate() {
        writeln!(out, "  X{} = {b}", i + 1)?;
    }
    writeln!(out, "closed: {}", if r.closed { "yes" } else { "no" })?;
    if let Some(k) = r.killing_rank {
        writeln!(out, "killing rank: {k}")?;
    }
    if !r.derived_dims.is_empty() {
        let s: Vec<String> = r.derived_dims.iter().map(ToString::to_string).collect();
        writeln!(out, "derived series: {}", s.join(" -> "))?;
    }
    Ok(())
}

pub fn cmd_symmetries(
    ode: &str,
    deg: u32,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let r = analyze(ode, deg)?;
    for w in &r.warnings {
        writeln!(err, "warning: {w}")?;
    }
    match format {
        Format::Text => write_symmetry_text(&r, out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &r).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(ode: &str, field: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let ode = parse_ode(ode)?;
    let field = parse_field(field)?;
    let r = verify(&ode, &field)?;
    if r.is_symmetry {
        writeln!(out, "symmetry: yes")?;
        writeln!(
            out,
            "leading coefficient: {}",
            ode.f.leading_coeff(ode.top_var())
        )?;
        writeln!(out, "power: {}", r.power)?;
        writeln!(out, "cofactor: {}", r.cofactor)?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "symmetry: no")?;
        writeln!(out, "defect: {}", r.defect)?;
        Ok(EXIT_FAILED)
    }
}

pub fn cmd_bracket(a: &str, b: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let a = parse_field(a)?;
    let b = parse_field(b)?;
    writeln!(out, "{}", bracket(&a, &b))?;
    Ok(EXIT_OK)
}

/// One line of a corpus file.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub ode: String,
    pub degree: u32,
    #[serde(default)]
    pub expected_dim: Option<usize>,
    #[serde(default)]
    pub expected_basis: Option<Vec<String>>,
    /// Free-form provenance remark; not interpreted.
    #[serde(default)]
    pub note: Option<String>,
}

/// A corpus entry parsed and validated before any solving.
struct PreparedEntry {
    entry: CorpusEntry,
    ode: OdeInput,
    expected_fields: Option<Vec<PointField>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub name: String,
    #[serde(flatten)]
    pub report: SymmetryReport,
    pub expected_ok: bool,
    pub expected_dim: Option<usize>,
    /// Whether every expected field passes verification.
    pub expected_basis_verified: Option<bool>,
    pub span_equal: Option<bool>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    /// Second-order dimensions, one per second-order entry, sorted.
    pub dims_observed: Vec<usize>,
    pub second_order_dims_in_theorem_set: bool,
    pub entries: usize,
    pub failed_entries: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
    pub summary: AuditSummary,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.summary.failed_entries.is_empty() && self.summary.second_order_dims_in_theorem_set
    }
}

pub fn load_corpus(text: &str) -> Result<Vec<CorpusEntry>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CliError::Corpus {
                line: i + 1,
                msg: e.to_string(),
            })
        })
        .collect()
}

fn prepare(entries: Vec<CorpusEntry>) -> Result<Vec<PreparedEntry>, CliError> {
    entries
        .into_iter()
        .map(|entry| {
            let bad = |msg: String| CliError::Corpus {
                line: 0,
                msg: format!("entry `{}`: {msg}", entry.name),
            };
            let ode = parse_ode(&entry.ode).map_err(|e| bad(e.to_string()))?;
            let expected_fields = entry
                .expected_basis
                .as_ref()
                .map(|fs| {
                    fs.iter()
                        .map(|f| parse_field(f))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()
                .map_err(|e| bad(e.to_string()))?;
            Ok(PreparedEntry {
                entry,
                ode,
                expected_fields,
            })
        })
        .collect()
}

fn run_entry(p: &PreparedEntry) -> AuditEntry {
    let e = &p.entry;
    let mut failures = Vec::new();
    let report = match analyze_ode(&e.ode, &p.ode, e.degree) {
        Ok(r) => r,
        Err(err) => {
            return AuditEntry {
                name: e.name.clone(),
                report: SymmetryReport {
                    ode: e.ode.clone(),
                    degree: e.degree,
                    dimension: 0,
                    basis: Vec::new(),
                    closed: false,
                    killing_rank: None,
                    derived_dims: Vec::new(),
                    order: p.ode.order,
                    f: p.ode.f.to_string(),
                    warnings: Vec::new(),
                    fields: Vec::new(),
                },
                expected_ok: false,
                expected_dim: e.expected_dim,
                expected_basis_verified: None,
                span_equal: None,
                failures: vec![format!("solver error: {err}")],
            }
        }
    };
    if let Some(d) = e.expected_dim {
        if d != report.dimension {
            failures.push(format!(
                "expected dimension {d}, computed {}",
                report.dimension
            ));
        }
    }
    let mut expected_basis_verified = None;
    let mut span_equal = None;
    if let Some(expected) = &p.expected_fields {
        let mut all = true;
        for f in expected {
            match verify(&p.ode, f) {
                Ok(v) if v.is_symmetry => {}
                Ok(v) => {
                    all = false;
                    failures.push(format!(
                        "expected field `{f}` is not a symmetry (defect {})",
                        v.defect
                    ));
                }
                Err(err) => {
                    all = false;
                    failures.push(format!("expected field `{f}`: {err}"));
                }
            }
        }
        expected_basis_verified = Some(all);
        let eq = fields_span_equal(expected, &report.fields);
        if !eq {
            failures.push("computed basis does not span the expected fields".to_string());
        }
        span_equal = Some(eq);
    }
    AuditEntry {
        name: e.name.clone(),
        report,
        expected_ok: failures.is_empty(),
        expected_dim: e.expected_dim,
        expected_basis_verified,
        span_equal,
        failures,
    }
}

/// Runs every entry on a pool of `jobs` threads; entries come back sorted
/// by name.
pub fn audit(entries: Vec<CorpusEntry>, jobs: NonZeroUsize) -> Result<AuditReport, CliError> {
    let prepared = prepare(entries)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.get())
        .build()
        .map_err(io::Error::other)?;
    let mut results: Vec<AuditEntry> =
        pool.install(|| prepared.par_iter().map(run_entry).collect());
    results.sort_by(|a, b| a.name.cmp(&b.name));

    let mut dims_observed: Vec<usize> = results
        .iter()
        .filter(|r| r.report.order == 2)
        .map(|r| r.report.dimension)
        .collect();
    dims_observed.sort_unstable();
    let in_set = dims_observed.iter().all(|d| THEOREM_DIMS.contains(d));
    let summary = AuditSummary {
        second_order_dims_in_theorem_set: in_set,
        entries: results.len(),
        failed_entries: results
            .iter()
            .filter(|r| !r.expected_ok)
            .map(|r| r.name.clone())
            .collect(),
        dims_observed,
        note: TRUNCATION_NOTE.to_string(),
    };
    Ok(AuditReport {
        entries: results,
        summary,
    })
}

fn write_atomically(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn cmd_audit(
    corpus: &Path,
    jobs: NonZeroUsize,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let text = fs::read_to_string(corpus)?;
    let report = audit(load_corpus(&text)?, jobs)?;
    let mut json = serde_json::to_string_pretty(&report).map_err(io::Error::from)?;
    json.push('\n');
    match out_path {
        Some(p) => write_atomically(p, json.as_bytes())?,
        None => out.write_all(json.as_bytes())?,
    }
    for e in report.entries.iter().filter(|e| !e.expected_ok) {
        for f in &e.failures {
            writeln!(err, "FAIL {}: {f}", e.name)?;
        }
    }
    if !report.summary.second_order_dims_in_theorem_set {
        writeln!(
            err,
            "FAIL summary: second-order dimensions {:?} leave {:?}",
            report.summary.dims_observed, THEOREM_DIMS
        )?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

/// Dispatches a parsed command line; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match &cli.command {
        Command::Symmetries { ode, deg, format } => cmd_symmetries(ode, *deg, *format, out, err),
        Command::Verify { ode, field } => cmd_verify(ode, field, out),
        Command::Bracket { a, b } => cmd_bracket(a, b, out),
        Command::Audit {
            corpus,
            jobs,
            out: path,
        } => cmd_audit(corpus, *jobs, path.as_deref(), out, err),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli =
            Cli::try_parse_from(std::iter::once("odesym").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(cli, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bracket_outputs() {
        assert_eq!(
            run_args(&["bracket", "1,0", "x,0"]),
            (0, "1, 0\n".into(), String::new())
        );
        assert_eq!(run_args(&["bracket", "1,0", "x^2,-x*y"]).1, "2*x, -y\n");
        assert_eq!(run_args(&["bracket", "0,y", "0,y"]).1, "0, 0\n");
        assert_eq!(run_args(&["bracket", "1,", "x,0"]).0, EXIT_INPUT);
    }

    #[test]
    fn verify_exit_codes() {
        let (code, out, _) = run_args(&["verify", "y=(y')^3", "--field", "2/3*x, y"]);
        assert_eq!(code, 0);
        assert!(out.contains("symmetry: yes"));
        let (code, out, _) = run_args(&["verify", "y*y''=2*(y')^2", "--field", "0, y^2"]);
        assert_eq!(code, 0);
        assert!(out.contains("cofactor: 3*y"));
        // y d/dx + y d/dy lies in sl3; y^2 d/dx leaves the defect -2*y1^3.
        assert_eq!(run_args(&["verify", "y''=0", "--field", "y, y"]).0, EXIT_OK);
        let (code, out, _) = run_args(&["verify", "y''=0", "--field", "y^2, 0"]);
        assert_eq!(code, EXIT_FAILED);
        assert!(out.contains("defect: -2*y1^3"));
        assert_eq!(
            run_args(&["verify", "y''=", "--field", "y, y"]).0,
            EXIT_INPUT
        );
        assert_eq!(
            run_args(&["verify", "y''=0", "--field", "y1, y"]).0,
            EXIT_INPUT
        );
    }

    #[test]
    fn symmetries_exit_codes() {
        assert_eq!(run_args(&["symmetries", "y*y''=(y')^2", "--deg", "2"]).0, 0);
        assert_eq!(
            run_args(&["symmetries", "y*y''=(y", "--deg", "2"]).0,
            EXIT_INPUT
        );
        assert_eq!(
            run_args(&["symmetries", "x = y", "--deg", "2"]).0,
            EXIT_DEGENERATE
        );
        assert_eq!(run_args(&["symmetries", "2 = 1"]).0, EXIT_DEGENERATE);
    }

    #[test]
    fn monomial_factor_warning() {
        let (code, _, err) = run_args(&["symmetries", "y*y''", "--deg", "1"]);
        assert_eq!(code, 0);
        assert!(err.contains("warning: F has the monomial factor y*y2"));
        let (_, _, err) = run_args(&["symmetries", "y*y''=2*(y')^2", "--deg", "1"]);
        assert!(err.is_empty());
    }

    #[test]
    fn corpus_parsing() {
        let text = "{\"name\":\"a\",\"ode\":\"y''=0\",\"degree\":2}\n\n{\"name\":\"b\",\"ode\":\"y'=0\",\"degree\":1,\"expected_dim\":5}\n";
        let c = load_corpus(text).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].expected_dim, Some(5));
        assert!(matches!(
            load_corpus("{\"name\":1}"),
            Err(CliError::Corpus { line: 1, .. })
        ));
        assert!(matches!(
            load_corpus("{\"name\":\"a\",\"ode\":\"y''\",\"degree\":1,\"bogus\":2}"),
            Err(CliError::Corpus { .. })
        ));
    }
}
