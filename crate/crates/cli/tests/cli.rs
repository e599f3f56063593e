use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonekit")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

/// Parse CSV rows into (header, rows).
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn universal_qubit_row() {
    let (h, rows) = csv(&stdout(&["fidelity", "--family", "universal", "--d", "2", "--n", "1", "--m", "2"]));
    assert_eq!(rows.len(), 1);
    let closed: f64 = rows[0][column(&h, "closed_form")].parse().unwrap();
    let machine: f64 = rows[0][column(&h, "machine")].parse().unwrap();
    let delta: f64 = rows[0][column(&h, "abs_delta")].parse().unwrap();
    assert!((closed - 5.0 / 6.0).abs() < 1e-11 && (machine - 5.0 / 6.0).abs() < 1e-11);
    assert!(delta < 1e-9);
}

#[test]
fn cv_and_phase_covariant_rows() {
    for (args, want) in [
        (vec!["fidelity", "--family", "cv", "--n", "1", "--m", "2"], 2.0 / 3.0),
        (vec!["fidelity", "--family", "pc", "--d", "2", "--m", "3"], 5.0 / 6.0),
    ] {
        let (h, rows) = csv(&stdout(&args));
        let machine: f64 = rows[0][column(&h, "machine")].parse().unwrap();
        assert!((machine - want).abs() < 1e-9, "{args:?}");
        assert_eq!(rows[0][column(&h, "agree")], "true");
    }
}

#[test]
fn csv_cells_carry_nine_significant_digits() {
    let (h, rows) = csv(&stdout(&["fidelity", "--family", "phase", "--d", "3", "--asymmetry", "0.7"]));
    for name in ["closed_form", "machine"] {
        for row in &rows {
            let cell = &row[column(&h, name)];
            let digits = cell.chars().take_while(|c| *c != 'e').filter(|c| c.is_ascii_digit()).collect::<String>();
            assert!(digits.trim_start_matches('0').len() >= 9, "{cell}");
        }
    }
}

#[test]
fn asymmetric_universal_matches_registry_labels() {
    let rows = json(&["--format", "json", "fidelity", "--family", "asym-universal", "--d", "3", "--asymmetry", "0.6"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(f(r, "abs_delta") < 1e-12);
    }
}

#[test]
fn optimize_universal_midpoint_is_certified() {
    let (h, rows) = csv(&stdout(&["optimize", "--family", "universal", "--d", "2", "--p", "0.5"]));
    assert_eq!(rows.len(), 1);
    let fa: f64 = rows[0][column(&h, "fa")].parse().unwrap();
    assert!((fa - 5.0 / 6.0).abs() < 1e-5);
    assert_eq!(rows[0][column(&h, "certified")], "true");
}

#[test]
fn optimize_header_is_family_independent() {
    let a = stdout(&["optimize", "--family", "universal", "--p", "0.4"]);
    let b = stdout(&["optimize", "--family", "phase", "--p", "0.4"]);
    assert_eq!(a.lines().next(), b.lines().next());
}

#[test]
fn simulate_pc_bs_at_optimal_reflectance() {
    let r = json(&["simulate", "pc-bs", "--r2", "0.7887"]);
    assert!((f(&r, "fidelity") - 0.8536).abs() < 5e-5);
    assert!((f(&r, "probability") - 0.3333).abs() < 5e-5);
}

#[test]
fn simulate_pdc_qubit() {
    let r = json(&["simulate", "pdc", "--n", "1", "--m", "2"]);
    assert!((f(&r, "fidelity") - 5.0 / 6.0).abs() < 1e-12);
    assert_eq!(r["fidelity_exact"], "5/6");
    assert!(f(&r, "truncation_deficit") < 1e-6);
    assert!(f(&r, "probability") > 0.0);
}

#[test]
fn simulate_reports_share_core_fields() {
    for scenario in [
        vec!["simulate", "pdc"],
        vec!["simulate", "symmetrize"],
        vec!["simulate", "filter"],
        vec!["simulate", "pc-bs"],
        vec!["simulate", "orthopair"],
        vec!["simulate", "cv-feedforward"],
    ] {
        let r = json(&scenario);
        for key in ["probability", "truncation_deficit", "registry"] {
            assert!(r.get(key).is_some(), "{scenario:?} lacks {key}");
        }
    }
    let r = json(&["simulate", "cv-feedforward"]);
    assert!((f(&r, "registry") - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn registry_dump() {
    let all = json(&["registry"]);
    let all = all.as_array().unwrap();
    assert!(all.len() >= 25);
    assert!(all.iter().all(|e| !e["citation"].as_str().unwrap().is_empty()));
    assert_eq!(json(&["registry", "--id", "entang"]).as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["optimize", "--family", "phase", "--points", "2", "--seed", "3"],
        vec!["--format", "json", "fidelity", "--family", "fourier", "--d", "3"],
        vec!["simulate", "symmetrize", "--n", "1", "--m", "3"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fidelity", "--family", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["optimize", "--family", "universal", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["fidelity", "--family", "pauli", "--asymmetry", "0.5,0.2,0"]).status.code(), Some(2));
    assert_eq!(run(&["--no-such-flag"]).status.code(), Some(2));
    let slow = run(&["optimize", "--family", "universal", "--p", "0.3", "--max-iter", "3"]);
    assert_eq!(slow.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&slow.stdout).contains("false"));
    let capped = Command::new(env!("CARGO_BIN_EXE_clonekit"))
        .args(["fidelity", "--family", "universal", "--d", "3", "--n", "1", "--m", "4"])
        .env("CLONEKIT_MAX_DIM", "8")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(4));
}
