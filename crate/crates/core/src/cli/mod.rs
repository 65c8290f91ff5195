//! Command-line front end: argument parsing, dispatch and reports.
//!
//! Every report is a single record holding the tool version, the full run
//! configuration, the seed, the wall time (unless `--omit-timing`) and the
//! result. Output is pretty JSON or a two-column `key,value` CSV.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::FieldSpec;
use crate::freelie::is_lie;
use crate::grassmann::{grassmann_lie_obstruction, mask_label, vanishes_on_grassmann, ObstructionVerdict};
use crate::mateval::census::{DEFAULT_BUDGET, Mode};
use crate::mateval::{nilcrit_check, run_census, CensusConfig, Domain, MatevalError, NilcritConfig};
use crate::symbolalg::{
    closed_form_readings, find_multilinear_lie_identities, identity_sweep, standard_ad_identity,
    verify_identity_candidate, IdentitySearchReport, SymbolAlgebra, SymbolError, DEFAULT_TUPLE_BUDGET,
    DEFAULT_VERIFY_TRIALS,
};
use crate::wordmaps::{word_census, WordCensusConfig, WordError, DEFAULT_WORD_BUDGET};

pub mod expr;

pub use expr::{parse_expression, parse_word, Expr, Factor, ParseError, Term};

/// Environment variable naming the number of worker threads.
pub const WORKERS_ENV: &str = "LIEPOLY_WORKERS";

#[derive(Parser, Debug, Clone)]
#[command(name = "liepoly", version, about = "Lie polynomials, matrix identities and word-map images")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Leave wall time out of the report so that reruns compare byte for byte.
    #[arg(long, global = true)]
    pub omit_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Decide whether a multilinear polynomial is a Lie polynomial.
    CheckLie(CheckLieArgs),
    /// Test whether a multilinear polynomial vanishes on a Grassmann algebra.
    Grassmann(GrassmannArgs),
    /// Search for multilinear Lie identities of sl_n.
    Identities(IdentitiesArgs),
    /// Classify the values of a polynomial on sl_n or gl_n.
    Census(CensusArgs),
    /// Check the determinant/entry criterion for the absence of nilpotent values.
    Nilcheck(NilcheckArgs),
    /// Image census of a word map on SL_2 or PSL_2.
    Wordmap(WordmapArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CheckLieArgs {
    #[arg(long)]
    pub poly: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GrassmannArgs {
    #[arg(long)]
    pub poly: String,
    /// Number of generators; defaults to the degree.
    #[arg(long)]
    pub generators: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Degree for a single search.
    #[arg(long, required_unless_present = "sweep", conflicts_with = "sweep")]
    pub degree: Option<usize>,
    /// Search degrees 2, 3, … until a nontrivial kernel appears.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
    /// Cap on (n²)^m substitution tuples.
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    pub budget: u64,
    /// Random sl_n(Q) substitutions per kernel vector.
    #[arg(long, default_value_t = DEFAULT_VERIFY_TRIALS)]
    pub verify_trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value = "q")]
    #[serde(serialize_with = "display")]
    pub field: FieldSpec,
    #[arg(long, default_value = "sl2")]
    #[serde(serialize_with = "display")]
    pub domain: Domain,
    #[arg(long, default_value = "sampled")]
    #[serde(serialize_with = "display")]
    pub mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NilcheckArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub curves: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Degree of the random curves.
    #[arg(long, default_value_t = 2)]
    pub curve_degree: usize,
    /// Bound on the integer curve coefficients.
    #[arg(long, default_value_t = 10)]
    pub height: i64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WordmapArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value = "gf5")]
    #[serde(serialize_with = "display")]
    pub field: FieldSpec,
    /// Work in PSL_2 (modulo ±I).
    #[arg(long)]
    pub projective: bool,
    #[arg(long, default_value = "exhaustive")]
    #[serde(serialize_with = "display")]
    pub mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_WORD_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Failed(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<MatevalError> for CliError {
    fn from(e: MatevalError) -> Self {
        match e {
            MatevalError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SymbolError> for CliError {
    fn from(e: SymbolError) -> Self {
        match e {
            SymbolError::CapacityExceeded { .. } => CliError::Budget(e.to_string()),
            SymbolError::VerdictDisagreement { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> Self {
        match e {
            WordError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Runs one subcommand and returns the full report record.
pub fn dispatch(cli: &Cli) -> Result<Value, CliError> {
    let start = Instant::now();
    let (name, seed, result) = match &cli.command {
        Command::CheckLie(a) => ("check-lie", None, check_lie(a)?),
        Command::Grassmann(a) => ("grassmann", None, grassmann(a)?),
        Command::Identities(a) => ("identities", Some(a.seed), identities(a)?),
        Command::Census(a) => ("census", Some(a.seed), census(a)?),
        Command::Nilcheck(a) => ("nilcheck", Some(a.seed), nilcheck(a)?),
        Command::Wordmap(a) => ("wordmap", Some(a.seed), wordmap(a)?),
    };
    let mut report = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "config": {
            "format": cli.format,
            "args": to_value(&cli.command)[name].clone(),
        },
        "seed": seed,
        "result": result,
    });
    if !cli.omit_timing {
        report["wall_time_ms"] = json!(start.elapsed().as_secs_f64() * 1000.0);
    }
    Ok(report)
}

fn check_lie(a: &CheckLieArgs) -> Result<Value, CliError> {
    let e = parse_expression(&a.poly)?;
    let p = e.to_assoc();
    let k = p.degree().unwrap_or(0);
    let linear = is_lie(&p, k).map_err(failed)?;
    let grass = if k >= 3 {
        Some(grassmann_lie_obstruction(&p, k).map_err(failed)?)
    } else {
        None
    };
    let (grass_json, method) = match (&grass, &linear) {
        (Some(ObstructionVerdict::NotLie { .. }), Some(w)) => {
            return Err(CliError::Invariant(format!(
                "Grassmann obstruction fired but {w} expands to the input"
            )))
        }
        (Some(ObstructionVerdict::NotLie { witness, value }), None) => (
            json!({
                "verdict": "NotLie",
                "witness": witness.iter().map(|m| mask_label(*m)).collect::<Vec<_>>(),
                "value": value.to_string(),
            }),
            "linear-system and Grassmann agree",
        ),
        (Some(ObstructionVerdict::Inconclusive), None) => (
            json!({"verdict": "Inconclusive"}),
            "linear-system (Grassmann inconclusive)",
        ),
        (Some(ObstructionVerdict::Inconclusive), Some(_)) => (
            json!({"verdict": "Inconclusive"}),
            "linear-system (Grassmann consistent)",
        ),
        (None, _) => (json!({"verdict": "NotApplicable"}), "linear-system"),
    };
    Ok(json!({
        "poly": p.to_string(),
        "degree": k,
        "verdict": if linear.is_some() { "Lie" } else { "NotLie" },
        "method": method,
        "witness": linear.map(|w| w.to_string()),
        "grassmann": grass_json,
    }))
}

fn grassmann(a: &GrassmannArgs) -> Result<Value, CliError> {
    let p = parse_expression(&a.poly)?.to_assoc();
    let n = a.generators.unwrap_or(p.degree().unwrap_or(0));
    let r = vanishes_on_grassmann(&p, n).map_err(failed)?;
    Ok(json!({
        "poly": p.to_string(),
        "generators": n,
        "vanishes": r.vanishes,
        "witness": r.witness.map(|w| w.iter().map(|m| mask_label(*m)).collect::<Vec<_>>()),
        "value": r.value.map(|v| v.to_string()),
        "tuples_checked": r.tuples_checked,
        "tuples_evaluated": r.tuples_evaluated,
    }))
}

fn search_json(r: &IdentitySearchReport, a: &IdentitiesArgs) -> Result<Value, CliError> {
    let mut verified = Vec::new();
    for k in &r.kernel {
        let v = verify_identity_candidate(k, r.n, a.verify_trials, a.seed)?;
        if !v.is_identity() {
            return Err(CliError::Invariant(format!("kernel vector {k} is not an identity")));
        }
        verified.push(v.is_identity());
    }
    let mut out = to_value(r);
    out["kernel_verified"] = json!(verified);
    if r.degree >= 2 {
        out["contains_standard_ad"] = json!(r.kernel_contains(&standard_ad_identity(r.degree - 1)));
    }
    Ok(out)
}

fn identities(a: &IdentitiesArgs) -> Result<Value, CliError> {
    let alg = SymbolAlgebra::new(a.n)?;
    let readings = closed_form_readings(&alg, 3.min(a.max_degree));
    if let Some(m) = a.degree {
        let r = find_multilinear_lie_identities(a.n, m, a.budget)?;
        return Ok(json!({
            "search": search_json(&r, a)?,
            "closed_form_readings": readings,
        }));
    }
    let s = identity_sweep(a.n, a.max_degree, a.budget)?;
    let reports = s
        .reports
        .iter()
        .map(|r| search_json(r, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "n": s.n,
        "max_degree": s.max_degree,
        "minimal_degree_found": s.minimal_degree_found,
        "reports": reports,
        "closed_form_readings": readings,
    }))
}

fn census(a: &CensusArgs) -> Result<Value, CliError> {
    let p = parse_expression(&a.poly)?.to_poly();
    let cfg = CensusConfig {
        domain: a.domain,
        field: a.field,
        mode: a.mode,
        trials: a.trials,
        seed: a.seed,
        budget: a.budget,
    };
    let c = run_census(&p, &cfg)?;
    let mut v = to_value(&c);
    v["classes"] = json!(c.classes().iter().map(|c| c.name()).collect::<Vec<_>>());
    Ok(v)
}

fn nilcheck(a: &NilcheckArgs) -> Result<Value, CliError> {
    let p = parse_expression(&a.poly)?.to_poly();
    let cfg = NilcritConfig {
        n: a.n,
        curves: a.curves,
        seed: a.seed,
        curve_degree: a.curve_degree,
        height: a.height,
        ..NilcritConfig::default()
    };
    let r = nilcrit_check(&p, &cfg)?;
    let mut v = to_value(&r);
    v["poly"] = json!(p.to_string());
    v["passed"] = json!(r.passed());
    Ok(v)
}

fn wordmap(a: &WordmapArgs) -> Result<Value, CliError> {
    let w = parse_word(&a.word)?;
    let cfg = WordCensusConfig {
        field: a.field,
        projective: a.projective,
        mode: a.mode,
        trials: a.trials,
        seed: a.seed,
        budget: a.budget,
    };
    let c = word_census(&w, &cfg)?;
    let mut v = to_value(&c);
    v["exponent_sums"] = json!(w.exponent_sums());
    Ok(v)
}

/// Flattens a JSON value into `(path, scalar)` rows.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", report, &mut rows);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, v) in rows {
                w.write_record([k, v]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
    }
}

/// Applies the worker-count environment variable to the global thread pool.
pub fn configure_workers() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CliError::Usage(format!("{WORKERS_ENV} must be positive")));
        }
        // A pool may already exist when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args`, runs the command and writes the report to `out`. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = configure_workers().and_then(|_| dispatch(&cli));
    match result {
        Ok(report) => {
            let _ = out.write_all(render(&report, cli.format).as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Value {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["liepoly", "--omit-timing"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
        serde_json::from_slice(&out).unwrap()
    }

    #[test]
    fn check_lie_s4() {
        let v = run_ok(&["check-lie", "--poly", "s4"]);
        assert_eq!(v["result"]["verdict"], "NotLie");
        assert_eq!(v["result"]["method"], "linear-system and Grassmann agree");
        let v = run_ok(&["check-lie", "--poly", "s2"]);
        assert_eq!(v["result"]["verdict"], "Lie");
    }

    #[test]
    fn census_badex() {
        let v = run_ok(&[
            "census", "--poly", "[[x1,x2],[x3,x4]]", "--field", "gf2", "--domain", "gl2", "--mode", "exhaustive",
        ]);
        assert_eq!(v["result"]["classes"], json!(["Zero", "ScalarNonzero"]));
        assert!(v.get("wall_time_ms").is_none());
    }

    #[test]
    fn exit_codes() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["liepoly", "census", "--poly", "[x1,"], &mut out, &mut err), 1);
        assert_eq!(run(["liepoly", "frobnicate"], &mut out, &mut err), 1);
        assert_eq!(
            run(
                ["liepoly", "census", "--poly", "s4", "--field", "gf5", "--mode", "exhaustive", "--budget", "10"],
                &mut out,
                &mut err
            ),
            2
        );
        assert_eq!(run(["liepoly", "--help"], &mut out, &mut err), 0);
    }

    #[test]
    fn csv_output() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            ["liepoly", "--format", "csv", "--omit-timing", "grassmann", "--poly", "s3"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, 0);
        let s = String::from_utf8(out).unwrap();
        assert!(s.starts_with("key,value\n"));
        assert!(s.contains("result.vanishes,false"));
    }
}
