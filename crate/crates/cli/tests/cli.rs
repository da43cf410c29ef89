//! End-to-end checks of the command-line surface and its exit codes.

use std::process::Command;

fn ykit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ykit"))
}

#[test]
fn selftest_quick_passes() {
    let out = ykit().args(["selftest", "--quick"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reflection_with_infinite_parameter() {
    let out = ykit()
        .args([
            "verify",
            "reflection",
            "--algebra",
            "sp:4",
            "--k",
            r#"{"family":"D1","params":{"c":"oo"}}"#,
            "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["schema"], "yangian-kit/report-v1");
}

#[test]
fn failing_check_exits_one() {
    // a custom matrix that is not a reflection solution
    let out = ykit()
        .args([
            "verify",
            "reflection",
            "--algebra",
            "so:3",
            "--k",
            r#"{"family":"CUSTOM","params":{"matrix":[["1","0","0"],["0","(1+u)/(1-u)","0"],["0","0","1"]]}}"#,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_error_exits_two() {
    let out = ykit().args(["verify", "ybe", "--algebra", "su:3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_lists_d4_for_so4() {
    let out = ykit()
        .args(["classify", "diagonal", "--algebra", "so:4", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let fams: Vec<&str> =
        v["families"].as_array().unwrap().iter().map(|f| f["family"].as_str().unwrap()).collect();
    assert!(fams.contains(&"D4"), "families: {fams:?}");
}

#[test]
fn spectrum_runs_with_boundary_json() {
    let out = ykit()
        .args([
            "spectrum",
            "--algebra",
            "sp:2",
            "--sites",
            "2",
            "--boundary",
            r#"{"family":"D1","params":{"c":"1/2"}}"#,
            "--lambda",
            "3/10+1/10i",
            "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["record"]["eigenvalues"].as_array().unwrap().len(), 4);
}

#[test]
fn json_reports_are_stable_modulo_timing() {
    let run = || {
        let out = ykit()
            .args(["verify", "crossing", "--algebra", "so:4", "--json"])
            .output()
            .unwrap();
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn bethe_solve_reports_roots_and_energy() {
    let out = ykit()
        .args([
            "bethe",
            "solve",
            "--series",
            "sp",
            "--k",
            "1",
            "--sites",
            "2",
            "--boundary",
            r#"{"family":"D1","params":{"xi":"7/4"}}"#,
            "--m",
            "1",
            "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 2);
    for st in states {
        assert!(st["max_residual"].as_f64().unwrap() < 1e-11);
    }
}

#[test]
fn thermo_grid_emits_csv() {
    let out = ykit()
        .args(["thermo", "kernels", "--series", "so", "--k", "2", "--grid", "0.5:1.5:0.5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("omega,"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn scatter_bulk_reports_unitarity() {
    let out = ykit()
        .args(["scatter", "bulk", "--series", "sp", "--n", "4", "--lambda", "0.3", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["unitarity_defect"].as_f64().unwrap() < 1e-8);
}
