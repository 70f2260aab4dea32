//! End-to-end runs of the `jordan-wishart` binary.
//!
//! Golden reports live in `tests/golden`; floats are compared to 1e-9
//! relative, everything else exactly. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordan-wishart"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "invalid JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    });
    (out.status.code().unwrap(), value)
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn same(a: &Value, b: &Value, path: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) if x.is_f64() || y.is_f64() => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0) {
                Ok(())
            } else {
                Err(format!("{path}: {x} != {y}"))
            }
        }
        (Value::Array(xs), Value::Array(ys)) => {
            if xs.len() != ys.len() {
                return Err(format!("{path}: length {} != {}", xs.len(), ys.len()));
            }
            xs.iter()
                .zip(ys)
                .enumerate()
                .try_for_each(|(i, (x, y))| same(x, y, &format!("{path}[{i}]")))
        }
        (Value::Object(xs), Value::Object(ys)) => {
            let kx: Vec<_> = xs.keys().collect();
            let ky: Vec<_> = ys.keys().collect();
            if kx != ky {
                return Err(format!("{path}: keys {kx:?} != {ky:?}"));
            }
            xs.iter()
                .try_for_each(|(k, x)| same(x, &ys[k], &format!("{path}.{k}")))
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{path}: {a} != {b}")),
    }
}

fn check_golden(name: &str, value: &Value) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(value).unwrap() + "\n").unwrap();
        return;
    }
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let want: Value = serde_json::from_str(&text).unwrap();
    if let Err(msg) = same(value, &want, "$") {
        panic!("{name} differs from golden: {msg}");
    }
}

#[test]
fn info_albert() {
    let (code, v) = run_json(&["info", "--algebra", "albert"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim_F1"], 351);
    assert_eq!(v["dim_F2"], 27);
    assert_eq!(v["n"], 27);
    check_golden("info_albert.json", &v);
}

#[test]
fn info_sym_and_spin() {
    let (code, v) = run_json(&["info", "--algebra", "sym", "--rank", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["dim_F1"].as_u64(), v["dim_F2"].as_u64()),
        (Some(15), Some(6))
    );
    let (code, v) = run_json(&["info", "--algebra", "spin", "--ambient", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim_F2"], 1);
    assert_eq!(v["d"], 3);
    check_golden("info_spin4.json", &v);
}

#[test]
fn human_output_is_rendered_from_the_report() {
    let out = run(&["info", "--algebra", "albert"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dim_F1: 351\n"));
    assert!(text.contains("pass: PASS\n"));
}

#[test]
fn check_identities_case_counts() {
    let (code, v) = run_json(&["check-identities", "--algebra", "sym", "--rank", "2"]);
    assert_eq!(code, 0);
    let entries = &v["case_table"]["entries"];
    let counts: Vec<u64> = ["A1", "A2", "B2", "B4", "B5"]
        .iter()
        .map(|c| entries[c]["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![2, 1, 2, 0, 0]);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));

    let (code, v) = run_json(&["check-identities", "--algebra", "herm", "--rank", "2"]);
    assert_eq!(code, 0);
    assert!((v["trace_psi_numeric"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = [
        "verify",
        "--algebra",
        "sym",
        "--rank",
        "2",
        "--p",
        "1",
        "--pp",
        "2",
        "--seed",
        "42",
        "--json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert!((v["constants"]["a"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["samples"], 100_000);
    let names: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["identity"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "linear",
            "quadratic_q1",
            "quadratic_q2",
            "differential_q1",
            "differential_q2"
        ]
    );
}

#[test]
fn verify_herm() {
    let (code, v) = run_json(&[
        "verify",
        "--algebra",
        "herm",
        "--rank",
        "2",
        "--p",
        "2",
        "--pp",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["constants"]["d"], 2);
    // b2 = a (p − 1)/(p + p' − 1) = 0.4 · 1/4
    assert!((v["constants"]["b2"].as_f64().unwrap() - 0.1).abs() < 1e-15);
}

#[test]
fn verify_rejects_unsupported_kinds() {
    let out = run(&[
        "verify",
        "--algebra",
        "quat",
        "--rank",
        "2",
        "--p",
        "3",
        "--pp",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("supported kinds: sym, herm"), "{err}");
}

#[test]
fn recover_examples() {
    let (code, v) = run_json(&[
        "recover",
        "--a",
        &(1.0f64 / 3.0).to_string(),
        "--b1",
        &(1.0f64 / 6.0).to_string(),
        "--b2",
        &(1.0f64 / 15.0).to_string(),
        "--n",
        "6",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["recovered"]["d_int"], 1);
    assert_eq!(v["recovered"]["r_int"], 3);
    assert_eq!(v["recovered"]["kind_candidates"][0]["kind"], "SymReal");
    check_golden("recover_sym3.json", &v);

    // a = 9/19, b1 = a·10/20, b2 = a·5/15 for p = 9, p' = 10, d = 8
    let a = 9.0f64 / 19.0;
    let (code, v) = run_json(&[
        "recover",
        "--a",
        &a.to_string(),
        "--b1",
        &(a * 0.5).to_string(),
        "--b2",
        &(a / 3.0).to_string(),
        "--n",
        "27",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["recovered"]["kind_candidates"][0]["kind"], "Albert");

    let out = run(&[
        "recover", "--a", "0.3", "--b1", "0.5", "--b2", "0.1", "--n", "6",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b2 < a^2 < b1 < a"));
}

#[test]
fn dims_table() {
    let (code, v) = run_json(&["dims-table"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let albert = rows.last().unwrap();
    assert_eq!(
        (albert["dim_F1"].as_u64(), albert["dim_F2"].as_u64()),
        (Some(351), Some(27))
    );
    check_golden("dims_table.json", &v);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["info", "--bogus"],
        vec!["info", "--algebra", "sym"],
        vec!["info", "--algebra", "octopus", "--rank", "2"],
        vec!["verify", "--algebra", "sym", "--rank", "2", "--p", "1"],
        vec![
            "verify",
            "--algebra",
            "sym",
            "--rank",
            "2",
            "--p",
            "1",
            "--pp",
            "1",
            "--sigma",
            "diag:1",
        ],
        vec!["recover", "--a", "0.3"],
        vec![],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn config_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"command": "info", "algebra": "sym", "rank": 3}"#,
    )
    .unwrap();
    let out_path = dir.path().join("report.json");
    let cfg = config.to_str().unwrap();
    let out = out_path.to_str().unwrap();

    let (code, v) = run_json(&["info", "--config", cfg]);
    assert_eq!(code, 0);
    assert_eq!(v["r"], 3);
    // flags win over the file
    let (code, v) = run_json(&["info", "--config", cfg, "--rank", "2", "--out", out]);
    assert_eq!(code, 0);
    assert_eq!(v["r"], 2);
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written, v);

    std::fs::write(&config, r#"{"algebra": "sym", "rnak": 3}"#).unwrap();
    assert_eq!(run(&["info", "--config", cfg]).status.code(), Some(2));
    std::fs::write(&config, r#"{"command": "verify"}"#).unwrap();
    assert_eq!(
        run(&["info", "--config", cfg, "--algebra", "albert"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_report_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "--algebra",
        "herm",
        "--rank",
        "2",
        "--p",
        "1",
        "--pp",
        "2.5",
        "--sigma",
        "random:3",
        "--samples",
        "20000",
        "--seed",
        "5",
        "--theta-grid",
        "0.1,0.2",
    ];
    let (code, v) = run_json(&args);
    assert_eq!(code, 0);
    let config = dir.path().join("config.json");
    std::fs::write(&config, serde_json::to_string(&v["config"]).unwrap()).unwrap();
    let (code, again) = run_json(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(again, v);
}
