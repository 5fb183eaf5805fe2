//! End-to-end checks of the CLI surface: output formats, determinism, and
//! exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_painleve3"))
}

#[test]
fn umemura_json_has_exact_strings() {
    let out = bin()
        .args(["umemura", "--m", "1/4", "--n-max", "2", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["m"], "1/4");
    // s_1 = (4x + 2m + 1)/2 at m = 1/4: coefficients [3/4, 2]
    assert_eq!(v["rows"][1]["coefficients"][0], "3/4");
    assert_eq!(v["rows"][1]["coefficients"][1], "2");
    assert_eq!(v["rows"][1]["u_at_zero"], "-1/3");
}

#[test]
fn umemura_zero_nmax_keeps_initial_data() {
    let out = bin()
        .args(["umemura", "--m", "1/3", "--n-max", "0", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0]["at_zero"], "1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn umemura_half_integer_m_exits_2() {
    let out = bin()
        .args(["umemura", "--m", "1/2", "--n-max", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn confluence_csv_has_header_and_monotone_gaps() {
    let out = bin()
        .args(["confluence", "--m", "1/4", "--z", "0.1", "--j", "2,4,8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "j,z_re,z_im,gap_even,gap_odd");
    let gaps: Vec<f64> = lines
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 3);
    assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1]);
}

#[test]
fn outputs_are_deterministic() {
    let run = || {
        bin()
            .args([
                "monodromy", "--draws", "8", "--seed", "7", "--format", "json",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
    let conf = || {
        bin()
            .args(["confluence", "--m", "1/4", "--z", "0.05", "--j", "2,4"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(conf(), conf());
}

#[test]
fn fredholm_lambda_one_column_is_affine() {
    let out = bin()
        .args([
            "fredholm", "--lambda", "1", "--r-grid", "1:3:3", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let r: f64 = cols[0].parse().unwrap();
        let ld: f64 = cols[4].parse().unwrap();
        assert!((ld + r / 4.0).abs() < 1e-12, "lnD_1({r}) = {ld}");
    }
}

#[test]
fn verify_subset_runs_and_passes() {
    let out = bin().args(["verify", "--only", "4,14"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2/2 criteria passed"), "got: {text}");
}

#[test]
fn verify_overtightened_tolerance_fails_numerics() {
    // tightening every numeric tolerance to ~1e-16 scale must break the
    // quadrature-backed criteria and exit 3
    let out = bin()
        .args(["verify", "--only", "6", "--tol-scale", "1e-8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
