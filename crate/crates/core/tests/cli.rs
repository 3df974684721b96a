use std::process::{Command, Output};

use serde_json::Value;

fn qaa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaa")).args(args).env_remove("QAA_MAX_QUBITS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn prep_improved_check() {
    let out = qaa(&["prep", "--variant", "improved", "--n", "4", "--x", "9", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["flag_amplitude"]["re"].as_f64().unwrap() - 0.28125).abs() < 1e-10);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-10);
    for key in ["inputs", "oracle", "simulated", "abs_error", "resources"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn recip_vanishing_cosine() {
    let out = qaa(&["recip", "--n", "2", "--y", "2", "--j", "2", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["product"].as_f64(), Some(1.0));
    assert!((v["simulated"]["re"].as_f64().unwrap() - 0.0625).abs() < 1e-12);
    assert!((v["circuit_amp_scaled"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(v["eps_bound"].as_f64().is_some());
}

#[test]
fn usage_errors_exit_two() {
    let out = qaa(&["prep", "--n", "1", "--x", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));

    assert_eq!(qaa(&["prep", "--n", "3", "--x", "8"]).status.code(), Some(2));
    assert_eq!(qaa(&["recip", "--n", "2", "--y", "1", "--j", "1"]).status.code(), Some(2));
    assert_eq!(qaa(&["recip", "--n", "2", "--j", "4"]).status.code(), Some(2));
    assert_eq!(qaa(&["polyfit", "--function", "cosh", "--out", "/dev/null"]).status.code(), Some(2));
    assert_eq!(qaa(&["polyfit", "--function", "tanh", "--domain", "0,1,2", "--out", "/dev/null"]).status.code(), Some(2));
    assert_eq!(qaa(&["bogus"]).status.code(), Some(2));
}

#[test]
fn qubit_limit_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qaa"))
        .args(["prep", "--n", "4", "--x", "1"])
        .env("QAA_MAX_QUBITS", "6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("qubit"));
}

#[test]
fn output_is_deterministic() {
    let args = ["prep", "--variant", "complex", "--n", "3", "--x", "5", "--b", "2", "--check"];
    let a = qaa(&args);
    let b = qaa(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fit_then_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("sigmoid.json");
    let table = table.to_str().unwrap();
    let out = qaa(&["polyfit", "--function", "sigmoid", "--domain", "0,1", "--degree", "3", "--pieces", "4", "--n-bits", "12", "--out", table]);
    assert_eq!(out.status.code(), Some(0));
    let fitted = json(&out);
    assert!(fitted["max_abs_error"].as_f64().unwrap() <= 1e-3);

    let out = qaa(&["polyeval", "--table", table, "--x", "0.3", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let circuit = v["circuit_value"].as_f64().unwrap();
    let exact = 1.0 / (1.0 + (-0.3f64).exp());
    assert!((circuit - exact).abs() <= 1e-3);

    assert_eq!(qaa(&["polyeval", "--table", table, "--x", "1.5"]).status.code(), Some(2));
    assert_eq!(qaa(&["polyeval", "--table", "/nonexistent.json", "--x", "0.5"]).status.code(), Some(2));
}

#[test]
fn export_round_trip_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prep.qasm");
    let path = path.to_str().unwrap();
    let out = qaa(&["prep", "--variant", "basic", "--n", "5", "--x", "19", "--check", "--export", path, "--check-roundtrip"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["roundtrip"]["abs_error"].as_f64().unwrap() < 1e-9);
    assert!(std::fs::read_to_string(path).unwrap().starts_with("OPENQASM 2.0;"));
}

#[test]
fn resources_and_export_commands() {
    let v = json(&qaa(&["resources", "--circuit", "prep-improved", "--n", "8"]));
    assert_eq!(v["resources"]["total_qubits"].as_u64(), Some(13));

    let v = json(&qaa(&["export", "--circuit", "add", "--thetas", "0.3,1.1"]));
    assert!(v["qasm"].as_str().unwrap().contains("qreg"));

    let v = json(&qaa(&["export", "--circuit", "cascade", "--n", "3"]));
    assert_eq!(v["resources"]["total_qubits"].as_u64(), Some(4));

    assert_eq!(qaa(&["export", "--circuit", "add", "--thetas", "0.3"]).status.code(), Some(2));
    assert_eq!(qaa(&["resources", "--circuit", "multiply", "--thetas", "4.0"]).status.code(), Some(2));
}
