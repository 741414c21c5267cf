//! Binary-level checks: output shapes, exit codes, and reproducibility.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freud-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn coeffs_csv_shape() {
    let text = stdout(&["coeffs", "--n-max", "100", "--method", "both", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,c_n,k_n,residual,trusted");
    assert_eq!(lines.len(), 102, "header plus 101 rows");
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[1], "0");
    assert!(first[2].starts_with("1.8128049541109541559653425779"));
    assert!(first[3].is_empty(), "no string residual at n = 0");
    assert_eq!(first[4], "true");
    assert!(lines[2].split(',').nth(1).unwrap().starts_with("3.3798912003364236"));
    // cross-engine agreement certifies a prefix; the forward engine cannot
    // vouch for the deep rows at this precision
    assert!(lines.iter().skip(1).take(60).all(|l| l.ends_with("true")));
    assert!(lines.iter().skip(1).all(|l| l.ends_with("true") || l.ends_with("false")));

    let newton = stdout(&["coeffs", "--n-max", "100", "--format", "csv"]);
    assert!(newton.lines().skip(1).all(|l| l.ends_with("true")));
}

#[test]
fn coeffs_rerun_byte_identical() {
    let a = run(&["coeffs", "--n-max", "40", "--method", "both"]);
    let b = run(&["coeffs", "--n-max", "40", "--method", "both"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_meta_and_nulls() {
    let text = stdout(&["coeffs", "--n-max", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["meta"]["command"], "coeffs");
    assert_eq!(v["meta"]["prec_bits"], "256");
    assert_eq!(v["meta"]["method"], "newton");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[0]["residual"].is_null());
    assert!(rows[1]["residual"].is_string());
    // numeric payloads stay decimal strings, never JSON numbers
    assert!(rows[1]["c_n"].as_str().unwrap().contains('e'));
}

#[test]
fn sobolev_case_and_norm() {
    let text = stdout(&["sobolev", "--n-max", "4", "--lambdas", "1,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["meta"]["case"], "lambda2_pos");
    let rows = v["rows"].as_array().unwrap();
    // khat_0 = mu_0 + lambda_0
    assert!(rows[0]["khat_n"]
        .as_str()
        .unwrap()
        .starts_with("2.8128049541109541559653425779"));
    // monic: coeff_n of Q_n is exactly 1, cells above stay null
    assert_eq!(rows[4]["coeff_4"], "1.0e+0");
    assert!(rows[2]["coeff_3"].is_null());
    // the odd-step connection slot a_1 exists, a_0 does not
    assert!(rows[0]["a_n"].is_null());
    assert!(rows[1]["a_n"].is_string());
}

#[test]
fn zeros_verdict_alignment() {
    let text = stdout(&["zeros", "--n-max", "6", "--lambdas", "1", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,q_zero,q_radius,p_zero,verdict");
    assert_eq!(lines.len(), 7);
    // verdicts sit on the positive tail rows only
    for (i, line) in lines.iter().enumerate().skip(1) {
        let verdict = line.rsplit(',').next().unwrap();
        if i <= 3 {
            assert!(verdict.is_empty(), "row {i}");
        } else {
            assert_eq!(verdict, "strict", "row {i}");
        }
    }
}

#[test]
fn ratio_error_decreases() {
    let text = stdout(&[
        "ratio", "--lambdas", "1", "--x", "1.5", "--n", "16,32,64,128", "--format", "csv",
    ]);
    let errs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(errs.len(), 4);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn exit_codes() {
    // bad configuration
    assert_eq!(run(&["zeros", "--n-max", "2"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "--prec-bits", "32"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "--lambdas", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "--tol", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--lambdas", "1,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["predict", "--r", "1"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    // verification failure: coarse arithmetic against a tight tolerance
    let out = run(&[
        "verify", "--n-max", "10", "--lambdas", "1", "--tol", "1e-40", "--prec-bits", "96",
    ]);
    assert_eq!(out.status.code(), Some(4));
    // success still emits the report before exiting nonzero
    assert!(!out.stdout.is_empty());
}

#[test]
fn file_output_matches_stdout() {
    let dir = std::env::temp_dir().join("freud-lab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("coeffs.csv");
    let by_stdout = stdout(&["coeffs", "--n-max", "10", "--format", "csv"]);
    let st = run(&[
        "coeffs", "--n-max", "10", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let by_file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(by_stdout, by_file);
}
