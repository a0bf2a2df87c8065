use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_ruinflow");

const ENTRANCE: &str = r#"{
  "model": {
    "claim": {"d": 2, "marginal": {"type": "pareto", "alpha": 1.5}},
    "dependence": {"inter": "fgm_chain", "theta": 0.5},
    "set": {"type": "half_space", "l": [0.5, 0.5], "b": 1.0},
    "renewal": {"type": "poisson", "rate": 1.0},
    "return": {"type": "deterministic", "r": 0.05}
  },
  "experiment": {"kind": "entrance"},
  "sim": {"n_paths": 40000, "seed": 3, "x_grid": [5, 20, 80], "horizon": 10}
}"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn ruinflow(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("RUINFLOW_THREADS").output().unwrap()
}

fn run_ok(args: &[&str]) -> Output {
    let out = ruinflow(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn echo(table: &Path) -> Value {
    let text = fs::read_to_string(format!("{}.config.json", table.display())).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn entrance_run_writes_table_echo_and_report() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", ENTRANCE);
    let out = dir.path().join("nested/entrance.csv");
    run_ok(&["--config", path(&cfg), "--out", path(&out)]);
    let table = fs::read_to_string(&out).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("x,p_hat,ci_lo,ci_hi,count,asymptotic,ratio"));
    assert_eq!(lines.count(), 3);
    let report = fs::read_to_string(format!("{}.report.txt", out.display())).unwrap();
    assert!(report.contains("theorem mode:"));
    assert!(report.contains("[PASS] consistently varying claims"));
    let e = echo(&out);
    // defaults are filled in the echo
    assert_eq!(e["sim"]["workers"], 1);
    assert_eq!(e["sim"]["ci_level"], 0.95);
    assert_eq!(e["experiment"]["mode"], "auto");
    assert_eq!(e["model"]["claim"]["marginals"].as_array().unwrap().len(), 2);
}

#[test]
fn echo_rerun_reproduces_outputs_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", ENTRANCE);
    let out = dir.path().join("first.csv");
    run_ok(&["--config", path(&cfg), "--out", path(&out), "--seed", "17"]);
    let table = fs::read(&out).unwrap();
    let report = fs::read(format!("{}.report.txt", out.display())).unwrap();
    let echo_path = PathBuf::from(format!("{}.config.json", out.display()));
    let echo_text = fs::read(&echo_path).unwrap();
    let copy = write(dir.path(), "echo.json", std::str::from_utf8(&echo_text).unwrap());
    run_ok(&["--config", path(&copy)]);
    assert_eq!(fs::read(&out).unwrap(), table);
    assert_eq!(fs::read(format!("{}.report.txt", out.display())).unwrap(), report);
    assert_eq!(fs::read(&echo_path).unwrap(), echo_text);
}

#[test]
fn command_line_beats_config_and_both_are_recorded() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", ENTRANCE);
    let out = dir.path().join("o.json");
    run_ok(&["--config", path(&cfg), "--out", path(&out), "--seed", "99", "--format", "json", "--threads", "2"]);
    let e = echo(&out);
    assert_eq!(e["sim"]["seed"], 99);
    assert_eq!(e["sim"]["workers"], 2);
    assert_eq!(e["output"]["format"], "json");
    let overrides = e["overrides"].as_array().unwrap();
    let seed = overrides.iter().find(|o| o["field"] == "sim.seed").unwrap();
    assert_eq!(seed["config"], 3);
    assert_eq!(seed["command_line"], 99);
    let rows: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert!(rows[0]["p_hat"].as_f64().unwrap() > 0.0);
}

#[test]
fn thread_variable_is_a_fallback_for_the_flag() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", ENTRANCE);
    let a = dir.path().join("env.csv");
    let b = dir.path().join("flag.csv");
    let status = Command::new(BIN)
        .args(["--config", path(&cfg), "--out", path(&a)])
        .env("RUINFLOW_THREADS", "3")
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert_eq!(echo(&a)["sim"]["workers"], 3);
    let status = Command::new(BIN)
        .args(["--config", path(&cfg), "--out", path(&b), "--threads", "2"])
        .env("RUINFLOW_THREADS", "3")
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert_eq!(echo(&b)["sim"]["workers"], 2);
    // worker count never changes results
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn assumption_report_passes_for_reference_model() {
    let dir = TempDir::new().unwrap();
    let text = r#"{
      "model": {
        "claim": {"d": 1, "marginal": {"type": "pareto", "alpha": 1.5}},
        "set": {"type": "ray", "b": 1.0},
        "renewal": {"type": "poisson", "rate": 1.0},
        "return": {"type": "deterministic", "r": 0.05}
      },
      "experiment": {"kind": "assumption_report"},
      "sim": {"n_paths": 1, "x_grid": [1], "horizon": 10}
    }"#;
    let cfg = write(dir.path(), "c.json", text);
    let out = dir.path().join("a.csv");
    run_ok(&["--config", path(&cfg), "--out", path(&out)]);
    let table = fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("mode,assumption,holds,detail\n"));
    assert!(table.lines().skip(1).all(|l| l.contains(",true,")), "{table}");
    for mode in ["consistent", "subexponential", "infinite"] {
        assert!(table.lines().any(|l| l.starts_with(mode)), "{mode}");
    }
}

#[test]
fn brownian_returns_in_consistent_mode_exit_with_named_assumption() {
    let dir = TempDir::new().unwrap();
    let text = ENTRANCE
        .replace(r#"{"type": "deterministic", "r": 0.05}"#, r#"{"type": "brownian", "mu": 0.1, "sigma": 0.2}"#)
        .replace(r#""kind": "entrance""#, r#""kind": "entrance", "mode": "consistent""#);
    let cfg = write(dir.path(), "c.json", &text);
    let out = dir.path().join("b.csv");
    let res = ruinflow(&["--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("bounded-below returns fails"), "{stderr}");
    assert!(!out.exists());
    let report = fs::read_to_string(format!("{}.report.txt", out.display())).unwrap();
    assert!(report.contains("[FAIL] bounded-below returns"));

    // the override runs and watermarks every artifact
    let res = ruinflow(&["--config", path(&cfg), "--out", path(&out), "--unsafe"]);
    assert_eq!(res.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().starts_with("# hypotheses not verified\n"));
    let report = fs::read_to_string(format!("{}.report.txt", out.display())).unwrap();
    assert!(report.contains("hypotheses not verified"));
    assert_eq!(echo(&out)["experiment"]["unchecked"], true);
}

#[test]
fn config_errors_exit_with_code_three() {
    let dir = TempDir::new().unwrap();
    let bad = [
        ENTRANCE.replace(r#""seed": 3"#, r#""seed": 3, "sead": 1"#),
        ENTRANCE.replace(r#""alpha": 1.5"#, r#""alpha": 0"#),
        "{ not json".to_string(),
    ];
    for (i, text) in bad.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{i}.json"), text);
        let res = ruinflow(&["--config", path(&cfg), "--out", path(&dir.path().join("x.csv"))]);
        assert_eq!(res.status.code(), Some(3), "case {i}");
    }
    let res = ruinflow(&["--config", path(&dir.path().join("missing.json"))]);
    assert_eq!(res.status.code(), Some(3));
    let res = ruinflow(&["--config", path(&dir.path().join("bad0.json")), "--format", "xml"]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn ruin_experiment_names_the_ruin_set() {
    let dir = TempDir::new().unwrap();
    let text = ENTRANCE
        .replace(
            r#""set": {"type": "half_space", "l": [0.5, 0.5], "b": 1.0}"#,
            r#""ruin": {"set": "sum", "weights": [0.5, 0.5], "alloc": [0.5, 0.5], "premiums": [{"rates": [0.5]}]}"#,
        )
        .replace(r#""kind": "entrance""#, r#""kind": "ruin""#);
    let cfg = write(dir.path(), "c.json", &text);
    let out = dir.path().join("r.csv");
    run_ok(&["--config", path(&cfg), "--out", path(&out)]);
    let table = fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("x,p_hat,ci_lo,ci_hi,count,asymptotic,ratio,ruin_set\n"));
    assert!(table.lines().skip(1).all(|l| l.ends_with(",sum")));
    let report = fs::read_to_string(format!("{}.report.txt", out.display())).unwrap();
    assert!(report.contains("path-level violations: 0"), "{report}");
}

#[test]
fn other_experiment_kinds_produce_their_tables() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (
            r#""kind": "entrance_time", "t_grid": [2, 4, 6, 8, 10]"#,
            "x,t,cdf,ci_lo,ci_hi,entered,limit",
        ),
        (
            r#""kind": "single_big_jump", "n_summands": 2, "weights": {"type": "uniform", "low": 0.5, "high": 1.0}"#,
            "x,p_sum,p_max_sum,ratio,ratio_se,ci_lo,ci_hi,sum_count,term_count",
        ),
        (r#""kind": "convergence_study""#, "x,p_hat,ci_lo,ci_hi,count,asymptotic,ratio"),
    ];
    for (i, (kind, header)) in cases.iter().enumerate() {
        let text = ENTRANCE.replace(r#""kind": "entrance""#, kind);
        let cfg = write(dir.path(), &format!("c{i}.json"), &text);
        let out = dir.path().join(format!("t{i}.csv"));
        run_ok(&["--config", path(&cfg), "--out", path(&out)]);
        let table = fs::read_to_string(&out).unwrap();
        assert_eq!(table.lines().next(), Some(*header));
    }
    let report = fs::read_to_string(dir.path().join("t2.csv.report.txt")).unwrap();
    assert!(report.contains("n_paths = 400:"));
    assert!(report.contains("n_paths = 4000:"));
}

#[test]
fn infinite_horizon_truncates_and_reports_the_bound() {
    let dir = TempDir::new().unwrap();
    let text = ENTRANCE.replace(r#""horizon": 10"#, r#""horizon": "inf""#);
    let cfg = write(dir.path(), "c.json", &text);
    let out = dir.path().join("inf.csv");
    run_ok(&["--config", path(&cfg), "--out", path(&out)]);
    let report = fs::read_to_string(format!("{}.report.txt", out.display())).unwrap();
    assert!(report.contains("infinite:"));
    assert!(report.contains("simulation truncated at T* ="));
    assert_eq!(echo(&out)["sim"]["horizon"], "inf");
}

#[test]
fn shipped_example_configs_resolve() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("docs/examples");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let text = fs::read_to_string(&p).unwrap();
        ruinflow::config::ExperimentConfig::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        n += 1;
    }
    assert!(n >= 4);
}
