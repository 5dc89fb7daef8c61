use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

/// Runs `tropcalc --json` and returns the exit code and parsed report.
fn tropcalc(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropcalc"))
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), report)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

#[test]
fn balance_reports() {
    let (code, r) = tropcalc(&["balance", &fixture("tropical_line.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["results"][0]["details"]["certificate"], serde_json::json!(["0/1", "0/1"]));
    let (code, r) = tropcalc(&["balance", &fixture("half_line.json")]);
    assert_eq!(code, 1);
    assert_eq!(r["results"][0]["details"]["certificate"], serde_json::json!(["1/1", "0/1"]));
    assert_eq!(r["data"]["boundary_faces"].as_array().unwrap().len(), 1);
}

#[test]
fn malformed_and_missing_input_exit_two() {
    let dir = std::env::temp_dir().join(format!("tropcalc-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"ambient_dim\": ").unwrap();
    let (code, r) = tropcalc(&["balance", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("malformed"));
    assert_eq!(tropcalc(&["balance", "/nonexistent/complex.json"]).0, 2);
}

#[test]
fn divisor_reports() {
    let weights = |r: &Value| r["data"]["divisor"]["weights"].clone();
    let (code, r) = tropcalc(&["divisor", &fixture("real_line.json"), &fixture("max_0_x.json")]);
    assert_eq!(code, 0);
    assert_eq!(weights(&r), serde_json::json!({"0": 1}));
    assert_eq!(r["data"]["divisor"]["cells"][0]["vertices"], serde_json::json!([["0/1"]]));
    let (_, r) = tropcalc(&["divisor", &fixture("real_line.json"), &fixture("affine_x.json")]);
    assert_eq!(weights(&r), serde_json::json!({}));
    let (_, r) = tropcalc(&["divisor", &fixture("tropical_line.json"), &fixture("max_0_x_y.json")]);
    assert_eq!(weights(&r), serde_json::json!({"0": 2}));
}

#[test]
fn pushforward_reports() {
    let line = fixture("line_1_3.json");
    let (code, r) = tropcalc(&["pushforward", &line, &fixture("project_y.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["pushforward"]["weights"], serde_json::json!({"0": 3}));
    let (_, r) = tropcalc(&["pushforward", &line, &fixture("identity_2.json")]);
    assert_eq!(r["data"]["pushforward"]["cells"][0]["lineality"], serde_json::json!([["1/1", "3/1"]]));
    let (_, r) = tropcalc(&["pushforward", &line, &fixture("collapse_2.json")]);
    assert_eq!(r["data"]["pushforward"]["weights"], serde_json::json!({}));
}

#[test]
fn form_identities() {
    let (code, r) = tropcalc(&["stokes", &fixture("interval.json"), &fixture("form_x2_dx.json")]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "stokes")["details"]["lhs"], "-1/1");
    assert_eq!(tropcalc(&["stokes", &fixture("interval.json"), &fixture("form_zero.json")]).0, 0);
    assert_eq!(tropcalc(&["stokes", &fixture("unit_square.json"), &fixture("stokes_square.json")]).0, 0);
    let (code, r) = tropcalc(&["stokes", &fixture("real_line.json"), &fixture("form_x2_dx.json")]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("unbounded cell"));
    let (code, r) = tropcalc(&[
        "green",
        &fixture("unit_square.json"),
        &fixture("green_omega_square.json"),
        &fixture("green_eta_square.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "green")["details"]["lhs"], check(&r, "green")["details"]["rhs"]);
    let (code, r) = tropcalc(&[
        "poincare-lelong",
        &fixture("tropical_line.json"),
        &fixture("max_0_x_y.json"),
        &fixture("bump_square.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "poincare-lelong")["details"]["rhs"], "2/1");
}

#[test]
fn asymmetric_green_input_is_a_hypothesis_error() {
    let (code, _) = tropcalc(&[
        "green",
        &fixture("unit_square.json"),
        &fixture("green_omega_square.json"),
        &fixture("stokes_square.json"),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn graph_reports() {
    let (code, r) = tropcalc(&["graph", "jacobian", &fixture("theta.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["gram"], serde_json::json!([["7/1", "5/1"], ["5/1", "8/1"]]));
    let (code, r) = tropcalc(&["graph", "dirichlet", &fixture("path_dirichlet.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["values"]["m"], "1/2");
    let (_, r) = tropcalc(&[
        "graph",
        "dirichlet",
        &fixture("path_dirichlet.json"),
        "--values",
        &fixture("path_values.json"),
    ]);
    assert_eq!(r["data"]["values"]["m"], "1/2");
    let (code, r) = tropcalc(&["graph", "abel-jacobi", &fixture("tree.json")]);
    assert_eq!(code, 0);
    assert!(r["data"]["images"].as_array().unwrap().iter().all(|i| i["value"] == serde_json::json!([])));
    let (code, r) = tropcalc(&["graph", "abel-jacobi", &fixture("theta.json"), "--point", "c@5/2"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["images"][0]["point"], "c@5/2");
    assert_eq!(tropcalc(&["graph", "harmonic-check", &fixture("path_harmonic.json")]).0, 0);
    let (code, r) = tropcalc(&["graph", "harmonic-check", &fixture("path_kink.json")]);
    assert_eq!(code, 1);
    assert_eq!(check(&r, "harmonic")["details"]["defects"]["m"], "1/1");
}

#[test]
fn dolbeault_needs_a_closed_graph() {
    let (code, r) = tropcalc(&["graph", "dolbeault", &fixture("theta.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["h10"], 2);
    let (code, r) = tropcalc(&["graph", "dolbeault", &fixture("path_dirichlet.json")]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("empty boundary"));
}

#[test]
fn theta_demo() {
    let (code, r) = tropcalc(&["theta-demo", "1", "1", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["gram"], serde_json::json!([["2/1", "1/1"], ["1/1", "2/1"]]));
    assert_eq!(r["data"]["dolbeault"], serde_json::json!([1, 2, 2, 1]));
    let (code, r) = tropcalc(&["theta-demo", "2", "3", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["iota_rows"][0], serde_json::json!(["7/1", "5/1"]));
    assert_eq!(tropcalc(&["theta-demo", "1", "0", "1"]).0, 2);
    assert_eq!(tropcalc(&["theta-demo", "1", "x", "1"]).0, 2);
}

#[test]
fn reports_are_deterministic_and_written_to_out() {
    let dir = std::env::temp_dir().join(format!("tropcalc-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut bodies = Vec::new();
    for k in 0..2 {
        let out = dir.join(format!("report{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_tropcalc"))
            .args(["--quiet", "--out", out.to_str().unwrap(), "graph", "jacobian", &fixture("theta.json")])
            .status()
            .unwrap();
        assert!(status.success());
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let report: Value = serde_json::from_slice(&bodies[0]).unwrap();
    assert_eq!(report["exit_code"], 0);
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}
