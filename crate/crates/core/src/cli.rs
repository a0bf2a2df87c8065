//! Config-driven experiment runner behind the `ruinflow` binary.
//!
//! A run writes three files next to each other: the result table at the
//! output path, `<out>.config.json` with the resolved configuration and
//! `<out>.report.txt` with the applied mode and every checked hypothesis.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, ExperimentKind, OutputFormat, OverrideRecord};
use crate::error::{Error, Result};
use crate::estimators::{
    check_mode, entrance_integral, entrance_time_limit, infer_mrv, ModeReport, ModeRequest, ModelSpec,
    TheoremMode,
};
use crate::montecarlo::{empirical_entrance, empirical_entrance_time, single_big_jump_check, EstimateTable};
use crate::ruin::empirical_ruin;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

pub const WATERMARK: &str = "hypotheses not verified";

/// Probability level below which table rows are not used for the summary ratio.
const SUMMARY_LEVEL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "ruinflow", version, about = "Empirical vs asymptotic entrance and ruin probabilities")]
pub struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads for the Monte Carlo engine.
    #[arg(long, value_name = "N", env = "RUINFLOW_THREADS")]
    pub threads: Option<usize>,
    /// Result table path; the config echo and report are written beside it.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Run even when the hypothesis gates fail; outputs are watermarked.
    #[arg(long = "unsafe")]
    pub unchecked: bool,
}

/// Paths written by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub table: Option<PathBuf>,
    pub config: PathBuf,
    pub report: PathBuf,
}

#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub artifacts: Option<Artifacts>,
    pub message: String,
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cli);
    if outcome.exit_code == EXIT_OK {
        println!("{}", outcome.message);
    } else {
        eprintln!("ruinflow: {}", outcome.message);
    }
    outcome.exit_code
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Hypothesis { .. } => EXIT_HYPOTHESIS,
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let cfg = match load(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            return Outcome {
                exit_code: exit_code(&e),
                artifacts: None,
                message: e.to_string(),
            }
        }
    };
    let out = PathBuf::from(cfg.output.path.as_deref().expect("resolved output path"));
    let artifacts = Artifacts {
        table: None,
        config: sibling(&out, "config.json"),
        report: sibling(&out, "report.txt"),
    };
    let result = execute(&cfg);
    let (exit, report, table, message) = match result {
        Ok(run) => {
            let msg = format!("wrote {}", out.display());
            (EXIT_OK, run.report, Some(run.table), msg)
        }
        Err(Failure { error, report }) => {
            let code = exit_code(&error);
            (code, report.unwrap_or_else(|| format!("run failed: {error}\n")), None, error.to_string())
        }
    };
    let written = write_all(&cfg, &out, &artifacts, &report, table.as_deref());
    match written {
        Ok(table_path) => Outcome {
            exit_code: exit,
            artifacts: Some(Artifacts {
                table: table_path,
                ..artifacts
            }),
            message,
        },
        Err(e) => Outcome {
            exit_code: EXIT_FAILURE,
            artifacts: None,
            message: e.to_string(),
        },
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn write_all(cfg: &ExperimentConfig, out: &Path, a: &Artifacts, report: &str, table: Option<&str>) -> Result<Option<PathBuf>> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&a.config, cfg.to_json() + "\n")?;
    fs::write(&a.report, report)?;
    match table {
        Some(t) => {
            fs::write(out, t)?;
            Ok(Some(out.to_path_buf()))
        }
        None => Ok(None),
    }
}

/// Reads the config, applies command-line overrides and fills the output path.
pub fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", cli.config.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    apply_overrides(&mut cfg, cli)?;
    if cfg.output.path.is_none() {
        cfg.output.path = Some(format!("ruinflow-{}.{}", cfg.experiment.kind.name(), cfg.output.format));
    }
    Ok(cfg)
}

fn apply_overrides(cfg: &mut ExperimentConfig, cli: &Cli) -> Result<()> {
    let mut records = Vec::new();
    if let Some(seed) = cli.seed {
        records.push(record("sim.seed", json!(cfg.sim.seed), json!(seed)));
        cfg.sim.seed = seed;
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        records.push(record("sim.workers", json!(cfg.sim.workers), json!(threads)));
        cfg.sim.workers = threads;
    }
    if let Some(out) = &cli.out {
        let out = out.to_string_lossy().into_owned();
        records.push(record("output.path", json!(cfg.output.path), json!(out)));
        cfg.output.path = Some(out);
    }
    if let Some(f) = cli.format {
        let f = OutputFormat::from(f);
        records.push(record("output.format", json!(cfg.output.format), json!(f)));
        cfg.output.format = f;
    }
    if cli.unchecked {
        records.push(record("experiment.unchecked", json!(cfg.experiment.unchecked), json!(true)));
        cfg.experiment.unchecked = true;
    }
    cfg.overrides.extend(records);
    Ok(())
}

fn record(field: &str, config: Value, command_line: Value) -> OverrideRecord {
    OverrideRecord {
        field: field.to_string(),
        config,
        command_line,
    }
}

/// Table text and report of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: String,
    pub report: String,
}

/// An error plus the report written alongside it, if any.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    pub report: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Self { error, report: None }
    }
}

/// Runs the configured experiment without touching the filesystem.
pub fn execute(cfg: &ExperimentConfig) -> std::result::Result<RunOutput, Failure> {
    let built = cfg.build()?;
    let mut report = Report::new(cfg);
    let table = match cfg.experiment.kind {
        ExperimentKind::AssumptionReport => return assumption_report(cfg, &built.spec, report),
        ExperimentKind::SingleBigJump => {
            report.line("hypothesis gate: none (compares two empirical quantities)");
            let sim = cfg.sim.sim_config(finite_or(cfg, None)?);
            let t = single_big_jump_check(
                &built.spec,
                cfg.experiment.weights.expect("resolved"),
                cfg.experiment.n_summands.expect("resolved"),
                &sim,
            )?;
            report.section("results");
            for r in &t.rows {
                let ratio = r.ratio.map_or("n/a".to_string(), |v| format!("{v:.4}"));
                report.line(&format!("x = {}: ratio {ratio} ({} sum exceedances)", r.x, r.sum_count));
            }
            format_rows(cfg, t.to_csv(), &t.to_json())
        }
        kind => {
            let gate = gate(cfg, &built.spec, &mut report)?;
            let horizon = gate.sim_horizon;
            let opts = cfg.experiment.numerics.options();
            let spec = &built.spec;
            match kind {
                ExperimentKind::Entrance | ExperimentKind::ConvergenceStudy => {
                    let sim = cfg.sim.sim_config(horizon);
                    let table = empirical_entrance(spec, &sim)?
                        .with_asymptotic(|x| Ok(entrance_integral(spec, x, horizon, &opts)?.value))?;
                    if kind == ExperimentKind::ConvergenceStudy {
                        report.section("convergence in n_paths");
                        for n in ladder(cfg.sim.n_paths) {
                            let small = EstimateTable {
                                n_paths: n,
                                ..empirical_entrance(spec, &crate::montecarlo::SimConfig { n_paths: n, ..sim.clone() })?
                            };
                            report.line(&format!("n_paths = {n}: {}", ratio_summary(&small, &table)));
                        }
                    }
                    summarize_ratios(&mut report, &table);
                    format_rows(cfg, table.to_csv(), &table.to_json())
                }
                ExperimentKind::Ruin => {
                    let rm = built.ruin.as_ref().expect("resolved ruin block");
                    if cfg.sim.horizon.0.is_infinite() && !rm.premiums_finite_at_infinity()? {
                        let e = Error::hypothesis(
                            "finite discounted premiums",
                            "∫ e^(-ξ(s)) p(s) ds may diverge; need r > 0 or φ(1) < 0",
                        );
                        if !cfg.experiment.unchecked {
                            report.line(&format!("[FAIL] {e}"));
                            return Err(Failure {
                                error: e,
                                report: Some(report.finish()),
                            });
                        }
                        report.line(&format!("[FAIL] {e} (ignored)"));
                    }
                    let sim = cfg.sim.sim_config(horizon);
                    let study = empirical_ruin(rm, &sim)?;
                    let table = study
                        .ruin
                        .with_asymptotic(|x| Ok(entrance_integral(&rm.base, x, horizon, &opts)?.value))?;
                    report.section("ruin sandwich");
                    match (study.shift, &study.entrance_shifted) {
                        (Some(u), Some(shifted)) => {
                            report.line(&format!("shift u = {u}"));
                            report.line(&format!("path-level violations: {}", study.violations));
                            for ((r, e), s) in table.rows.iter().zip(&study.entrance.rows).zip(&shifted.rows) {
                                report.line(&format!(
                                    "x = {}: entrance(x) {} >= ruin(x) {} >= entrance(x+u) {}",
                                    r.x, e.count, r.count, s.count
                                ));
                            }
                        }
                        _ => report.line("not available: returns are not bounded below on the horizon"),
                    }
                    summarize_ratios(&mut report, &table);
                    format_rows(cfg, table.to_csv(), &table.to_json())
                }
                ExperimentKind::EntranceTime => {
                    let t_grid = cfg.experiment.t_grid.as_deref().expect("resolved");
                    if t_grid.last().is_some_and(|t| *t > horizon) {
                        return Err(Error::Config(format!("experiment.t_grid exceeds the simulation horizon {horizon}")).into());
                    }
                    let mut with_mrv = spec.clone();
                    if with_mrv.mrv.is_none() {
                        with_mrv.mrv = infer_mrv(&spec.claim, &spec.set).ok();
                    }
                    let sim = cfg.sim.sim_config(horizon);
                    let mut table = empirical_entrance_time(spec, t_grid, &sim)?;
                    report.section("entrance time");
                    if with_mrv.mrv.is_some() {
                        table = table.with_limit(|t| entrance_time_limit(&with_mrv, t, horizon))?;
                        for &x in &cfg.sim.x_grid {
                            if let Some(d) = table.sup_distance(x) {
                                report.line(&format!("x = {x}: sup distance to the limit law {d:.4}"));
                            }
                        }
                    } else {
                        report.line("limit law unavailable: no MRV description of the claims");
                    }
                    format_rows(cfg, table.to_csv(), &table.to_json())
                }
                ExperimentKind::AssumptionReport | ExperimentKind::SingleBigJump => unreachable!(),
            }
        }
    };
    Ok(RunOutput {
        table,
        report: report.finish(),
    })
}

fn finite_or(cfg: &ExperimentConfig, truncation: Option<f64>) -> Result<f64> {
    let h = cfg.sim.horizon.0;
    if h.is_finite() {
        Ok(h)
    } else {
        truncation.ok_or_else(|| Error::Config(format!("{} needs a finite sim.horizon", cfg.experiment.kind.name())))
    }
}

fn ladder(n: u64) -> Vec<u64> {
    [n / 100, n / 10].into_iter().filter(|&k| k >= 1).collect()
}

fn ratio_summary(small: &EstimateTable, full: &EstimateTable) -> String {
    let parts: Vec<String> = small
        .rows
        .iter()
        .zip(&full.rows)
        .map(|(s, f)| match f.asymptotic.filter(|a| *a > 0.0 && s.count > 0) {
            Some(a) => format!("{:.4}", s.p_hat / a),
            None => "n/a".into(),
        })
        .collect();
    format!("ratios [{}]", parts.join(", "))
}

fn summarize_ratios(report: &mut Report, table: &EstimateTable) {
    report.section("ratio p_hat / asymptotic");
    for r in &table.rows {
        let ratio = r.ratio.map_or("n/a".to_string(), |v| format!("{v:.4}"));
        report.line(&format!("x = {}: p_hat {:e} ({} paths), ratio {ratio}", r.x, r.p_hat, r.count));
    }
    match table.last_row_above(SUMMARY_LEVEL) {
        Some(r) => report.line(&format!(
            "largest x with p_hat >= {SUMMARY_LEVEL:e}: {} (ratio {})",
            r.x,
            r.ratio.map_or("n/a".to_string(), |v| format!("{v:.4}"))
        )),
        None => report.line(&format!("no grid level reaches p_hat >= {SUMMARY_LEVEL:e}")),
    }
}

fn format_rows(cfg: &ExperimentConfig, csv: String, json: &str) -> String {
    let unchecked = cfg.experiment.unchecked;
    match cfg.output.format {
        OutputFormat::Csv if unchecked => format!("# {WATERMARK}\n{csv}"),
        OutputFormat::Csv => csv,
        OutputFormat::Json => {
            let rows: Value = serde_json::from_str(json).expect("tables serialize to JSON");
            let doc = if unchecked {
                json!({ "watermark": WATERMARK, "rows": rows })
            } else {
                rows
            };
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    }
}

struct Gate {
    sim_horizon: f64,
}

/// Candidate modes for the configured request and horizon.
fn candidates(request: ModeRequest, horizon: f64) -> Vec<TheoremMode> {
    match request {
        ModeRequest::Fixed(m) => vec![m],
        ModeRequest::Auto if horizon.is_infinite() => vec![TheoremMode::Infinite],
        ModeRequest::Auto => vec![TheoremMode::FiniteConsistent, TheoremMode::FiniteSubexponential],
    }
}

fn gate(cfg: &ExperimentConfig, spec: &ModelSpec, report: &mut Report) -> std::result::Result<Gate, Failure> {
    let horizon = cfg.sim.horizon.0;
    let exponents = cfg.experiment.exponents();
    let request = cfg.experiment.mode.request();
    let mut reports = Vec::new();
    for mode in candidates(request, horizon) {
        reports.push(check_mode(spec, mode, horizon, exponents)?);
    }
    let chosen = reports.iter().find(|r| r.holds()).or(reports.first()).expect("at least one candidate");
    report.mode(chosen);
    for other in reports.iter().filter(|r| r.mode != chosen.mode) {
        report.line(&format!("also checked the {} mode:", other.mode));
        report.checks(other);
    }
    if let Some(err) = chosen.to_error() {
        if cfg.experiment.unchecked {
            report.line(&format!("gate failed and was bypassed: {err}"));
        } else {
            let err = with_hint(err, spec, request, horizon, exponents);
            report.line(&format!("gate failed: {err}"));
            return Err(Failure {
                error: err,
                report: Some(report.clone().finish()),
            });
        }
    }
    let sim_horizon = if horizon.is_finite() {
        horizon
    } else {
        let s = chosen.summability.as_ref().filter(|s| s.holds).ok_or_else(|| Failure {
            error: Error::hypothesis("discount summability", "no truncation horizon without summable discounts"),
            report: Some(report.clone().finish()),
        })?;
        let t = s.truncation_horizon.expect("set when summability holds");
        report.line(&format!(
            "simulation truncated at T* = {t} (relative remainder bound {:e})",
            s.truncation_bound.unwrap_or(f64::NAN)
        ));
        t
    };
    Ok(Gate { sim_horizon })
}

/// Names a mode whose hypotheses do hold when a fixed mode fails.
fn with_hint(err: Error, spec: &ModelSpec, request: ModeRequest, horizon: f64, exponents: crate::estimators::Exponents) -> Error {
    let ModeRequest::Fixed(failed) = request else { return err };
    let alternative = candidates(ModeRequest::Auto, horizon)
        .into_iter()
        .filter(|m| *m != failed)
        .find(|m| check_mode(spec, *m, horizon, exponents).is_ok_and(|r| r.holds()));
    match (err, alternative) {
        (Error::Hypothesis { assumption, detail }, Some(m)) => Error::Hypothesis {
            assumption,
            detail: format!("{detail}; use the {} mode", m.name()),
        },
        (err, _) => err,
    }
}

#[derive(Serialize)]
struct CheckRow<'a> {
    mode: &'a str,
    assumption: &'a str,
    holds: bool,
    detail: &'a str,
}

fn assumption_report(cfg: &ExperimentConfig, spec: &ModelSpec, mut report: Report) -> std::result::Result<RunOutput, Failure> {
    let horizon = cfg.sim.horizon.0;
    let exponents = cfg.experiment.exponents();
    let finite = if horizon.is_finite() { horizon } else { 1.0 };
    let all: Vec<ModeReport> = [TheoremMode::FiniteConsistent, TheoremMode::FiniteSubexponential, TheoremMode::Infinite]
        .into_iter()
        .map(|m| check_mode(spec, m, if m == TheoremMode::Infinite { f64::INFINITY } else { finite }, exponents))
        .collect::<Result<_>>()?;
    let wanted = candidates(cfg.experiment.mode.request(), horizon);
    report.section("modes");
    for r in &all {
        let status = if r.holds() { "applies" } else { "does not apply" };
        let marker = if wanted.contains(&r.mode) { " (requested)" } else { "" };
        report.line(&format!("{} mode {status}{marker}: {}", r.mode, r.mode.describe()));
        report.checks(r);
    }
    let rows: Vec<CheckRow> = all
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(move |c| CheckRow {
                mode: r.mode.name(),
                assumption: &c.name,
                holds: c.holds,
                detail: &c.detail,
            })
        })
        .collect();
    let mut csv = String::from("mode,assumption,holds,detail\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},\"{}\"", r.mode, r.assumption, r.holds, r.detail.replace('"', "\"\""));
    }
    let json = serde_json::to_string_pretty(&rows).expect("rows serialize");
    let table = format_rows(cfg, csv, &json);
    let passed = all.iter().find(|r| wanted.contains(&r.mode) && r.holds());
    match passed {
        Some(_) => Ok(RunOutput {
            table,
            report: report.finish(),
        }),
        None => {
            let first = all.iter().find(|r| wanted.contains(&r.mode)).expect("requested mode evaluated");
            let error = first.to_error().expect("failed mode has a failed check");
            Err(Failure {
                error,
                report: Some(report.finish()),
            })
        }
    }
}

/// Plain-text run report.
#[derive(Debug, Clone)]
struct Report {
    text: String,
}

impl Report {
    fn new(cfg: &ExperimentConfig) -> Self {
        let mut text = String::new();
        if cfg.experiment.unchecked {
            let _ = writeln!(text, "*** {WATERMARK} ***\n");
        }
        let _ = writeln!(text, "ruinflow report");
        let _ = writeln!(text, "experiment: {}", cfg.experiment.kind.name());
        let model = serde_json::to_string(&cfg.model).expect("model serializes");
        let _ = writeln!(text, "model: {model}");
        let h = cfg.sim.horizon.0;
        let _ = writeln!(text, "horizon: {}", if h.is_infinite() { "inf".to_string() } else { h.to_string() });
        let _ = writeln!(
            text,
            "paths: {} (seed {}, {} worker{})",
            cfg.sim.n_paths,
            cfg.sim.seed,
            cfg.sim.workers,
            if cfg.sim.workers == 1 { "" } else { "s" }
        );
        for o in &cfg.overrides {
            let _ = writeln!(text, "override {}: {} -> {}", o.field, o.config, o.command_line);
        }
        Self { text }
    }

    fn section(&mut self, title: &str) {
        let _ = writeln!(self.text, "\n{title}:");
    }

    fn line(&mut self, s: &str) {
        let _ = writeln!(self.text, "  {s}");
    }

    fn mode(&mut self, r: &ModeReport) {
        self.section("theorem mode");
        self.line(&format!("{}: {}", r.mode, r.mode.describe()));
        self.checks(r);
    }

    fn checks(&mut self, r: &ModeReport) {
        for c in &r.checks {
            let tag = if c.holds { "PASS" } else { "FAIL" };
            self.line(&format!("[{tag}] {}: {}", c.name, c.detail));
        }
        if let Some(s) = &r.summability {
            self.line(&format!(
                "discount summability: p1 = {}, p2 = {}, rho = {:.6}, series bound {:e}",
                s.p1, s.p2, s.rho, s.series_bound
            ));
        }
    }

    fn finish(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "model": {
            "claim": {"d": 1, "marginal": {"type": "pareto", "alpha": 1.5}},
            "set": {"type": "ray", "b": 1.0},
            "renewal": {"type": "poisson", "rate": 1.0},
            "return": {"type": "deterministic", "r": 0.05}
        },
        "experiment": {"kind": "assumption_report"},
        "sim": {"n_paths": 2000, "seed": 5, "x_grid": [5, 20], "horizon": 10}
    }"#;

    fn cfg(text: &str) -> ExperimentConfig {
        let mut c = ExperimentConfig::from_json(text).unwrap();
        c.output.path = Some("unused.csv".into());
        c
    }

    #[test]
    fn assumption_report_passes_for_reference_model() {
        let out = execute(&cfg(BASE)).unwrap();
        assert!(out.table.starts_with("mode,assumption,holds,detail\n"));
        assert!(!out.table.contains(",false,"));
        assert!(out.report.contains("consistent mode applies"));
        assert!(out.report.contains("infinite mode applies"));
    }

    #[test]
    fn brownian_returns_fail_the_consistent_gate_by_name() {
        let text = BASE
            .replace(r#"{"type": "deterministic", "r": 0.05}"#, r#"{"type": "brownian", "mu": 0.05, "sigma": 0.2}"#)
            .replace(r#""kind": "assumption_report""#, r#""kind": "entrance", "mode": "consistent""#);
        let err = execute(&cfg(&text)).unwrap_err();
        assert_eq!(exit_code(&err.error), EXIT_HYPOTHESIS);
        assert!(err.error.to_string().starts_with("bounded-below returns fails"), "{}", err.error);
        assert!(err.report.unwrap().contains("[FAIL] bounded-below returns"));
    }

    #[test]
    fn unsafe_runs_are_watermarked() {
        let text = BASE
            .replace(r#"{"type": "deterministic", "r": 0.05}"#, r#"{"type": "brownian", "mu": 0.05, "sigma": 0.2}"#)
            .replace(r#""kind": "assumption_report""#, r#""kind": "entrance", "mode": "consistent", "unchecked": true"#);
        let out = execute(&cfg(&text)).unwrap();
        assert!(out.table.starts_with(&format!("# {WATERMARK}\n")));
        assert!(out.report.starts_with(&format!("*** {WATERMARK} ***")));
    }

    #[test]
    fn entrance_table_has_the_documented_columns() {
        let text = BASE.replace(r#""kind": "assumption_report""#, r#""kind": "entrance""#);
        let out = execute(&cfg(&text)).unwrap();
        assert!(out.table.starts_with("x,p_hat,ci_lo,ci_hi,count,asymptotic,ratio\n"));
        assert_eq!(out.table.lines().count(), 3);
        let mut c = cfg(&text);
        c.output.format = OutputFormat::Json;
        let json: Value = serde_json::from_str(&execute(&c).unwrap().table).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 2);
    }

    #[test]
    fn ladder_skips_empty_sizes() {
        assert_eq!(ladder(1000), vec![10, 100]);
        assert_eq!(ladder(50), vec![5]);
    }
}
