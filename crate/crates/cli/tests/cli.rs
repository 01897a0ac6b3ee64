//! End-to-end tests of the command-line interface: exit codes, file
//! round-trips, and the output formats of each subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dfcheb"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

const EXP_PROBLEM: &str = r#"{"operator": [["-1"], ["1"]], "initial_values": ["1"]}"#;

#[test]
fn recurrence_prints_exponential_relation() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", EXP_PROBLEM);
    let out = bin()
        .args(["recurrence", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("b_{-1} = -1, b_0 = 2n, b_1 = 1"), "{text}");
    assert!(text.contains("singularities: {}"), "{text}");

    let out = bin()
        .args(["recurrence", "--polygon", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("slope -1"), "{text}");
    assert!(text.contains("slope 1"), "{text}");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", "{ not json");
    let out = bin()
        .args(["recurrence", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_code(&out, 2);
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn approx_round_trips_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", EXP_PROBLEM);
    let coeffs = dir.path().join("c.json");
    let out = bin()
        .args(["approx", "--degree", "12", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&coeffs)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let first = std::fs::read_to_string(&coeffs).unwrap();
    // Running again reproduces the file bit for bit.
    let out = bin()
        .args(["approx", "--degree", "12", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&coeffs)
        .output()
        .unwrap();
    assert_code(&out, 0);
    assert_eq!(first, std::fs::read_to_string(&coeffs).unwrap());
    // And the file parses as rational strings.
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(v.as_array().unwrap().len() == 13);
}

#[test]
fn solve_writes_report_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", EXP_PROBLEM);
    let coeffs = dir.path().join("c.json");
    let report = dir.path().join("r.json");
    let out = bin()
        .args(["solve", "--degree", "12", "--eps", "1e-30", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&coeffs)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r["B"]["rational"].as_str().unwrap().contains('/'));
    assert!(r["B"]["decimal"].as_str().unwrap().contains('e'));
    assert!(r["i"].as_u64().unwrap() >= 1);
    assert!(r["timings_ms"]["approx"].is_number());
    // The enclosure brackets the degree-12 truncation error of exp
    // (about 1.8e-14).
    let b: f64 = r["B"]["decimal"].as_str().unwrap().parse().unwrap();
    let lo: f64 = r["b"]["decimal"].as_str().unwrap().parse().unwrap();
    assert!(lo <= 1.9e-14 && 1.7e-14 <= b, "enclosure [{lo:e}, {b:e}]");
}

#[test]
fn validate_rejects_vanishing_leading_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "p.json",
        r#"{"operator": [["-1"], ["0", "1"]], "initial_values": ["1"]}"#,
    );
    let coeffs = write(dir.path(), "c.json", r#"["1", "1"]"#);
    let out = bin()
        .args(["validate", "--eps", "1e-10", "--input"])
        .arg(&input)
        .arg("--poly")
        .arg(&coeffs)
        .output()
        .unwrap();
    assert_code(&out, 2);
}

#[test]
fn sample_produces_expected_rows() {
    let dir = tempfile::tempdir().unwrap();
    // p = T_0: constant 1 everywhere.
    let coeffs = write(dir.path(), "c.json", r#"["1"]"#);
    let out = bin()
        .args(["sample", "--count", "3", "--digits", "6", "--coeffs"])
        .arg(&coeffs)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("-1.000000,1.000000"));
    assert!(lines[2].starts_with("0.000000,1.000000"));
    assert!(lines[3].starts_with("1.000000,1.000000"));

    // p = T_1 at x = 1/2 gives 0.5.
    let coeffs = write(dir.path(), "c1.json", r#"["0", "1"]"#);
    let csv = dir.path().join("rows.csv");
    let out = bin()
        .args(["sample", "--count", "5", "--digits", "4", "--coeffs"])
        .arg(&coeffs)
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("0.5000,0.5000"), "{text}");

    // Chebyshev nodes include the endpoints.
    let out = bin()
        .args(["sample", "--count", "3", "--digits", "4", "--nodes", "chebyshev", "--coeffs"])
        .arg(&coeffs)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("1.0000,1.0000"), "{text}");
    assert!(text.contains("-1.0000,-1.0000"), "{text}");
}

#[test]
fn expand_rational_matches_closed_form() {
    let out = bin()
        .args(["expand-rational", "--num", "1", "--den", "2,-1", "--eps", "1e-12"])
        .output()
        .unwrap();
    assert_code(&out, 0);
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let first = v.as_array().unwrap()[0].as_str().unwrap();
    // u_0 = 1/sqrt(3) ~ 0.57735.
    let (p, q) = first.split_once('/').unwrap();
    let val: f64 = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
    assert!((val - 0.5773502691896258).abs() < 1e-12);

    // A pole inside the interval is an input error.
    let out = bin()
        .args(["expand-rational", "--num", "1", "--den", "0,1", "--eps", "1e-12"])
        .output()
        .unwrap();
    assert_code(&out, 2);
}

#[test]
fn interval_rescaling_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    // y' = y on [0, 2] with y(1) = 1 maps to y' = y on [-1, 1] with
    // y(0) = 1 (the shifted exponential).
    let input = write(
        dir.path(),
        "p.json",
        r#"{"operator": [["-1"], ["1"]],
            "conditions": [{"terms": [{"weight": "1", "order": 0, "point": "1"}],
                            "target": "1"}],
            "interval": ["0", "2"]}"#,
    );
    let coeffs = dir.path().join("c.json");
    let out = bin()
        .args(["approx", "--degree", "10", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&coeffs)
        .output()
        .unwrap();
    assert_code(&out, 0);
    // Sample at the rescaled origin: value must be 1.
    let out = bin()
        .args(["sample", "--count", "3", "--digits", "8", "--coeffs"])
        .arg(&coeffs)
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0.00000000,1.00000000"), "{text}");
}

#[test]
fn retry_cap_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", EXP_PROBLEM);
    let coeffs = dir.path().join("c.json");
    // An absurd value must still parse and work.
    let out = bin()
        .env("DFC_MAX_RETRIES", "0")
        .args(["approx", "--degree", "8", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&coeffs)
        .output()
        .unwrap();
    assert_code(&out, 0);
}
