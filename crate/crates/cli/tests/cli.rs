use std::process::{Command, Output};

use serde_json::Value;

fn dlconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlconn")).args(args).env_remove("DLCONN_MAX_FLAGS").output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn criterion_reports_disconnected_set() {
    let out = dlconn(&["criterion", "--group", "A2", "--twist", "1", "--set", "0"]);
    assert!(out.status.success());
    assert_eq!(lines(&out)[0]["connected"], false);
    let out = dlconn(&["criterion", "--group", "A3", "--twist", "2A3", "--set", "0,1"]);
    assert_eq!(lines(&out)[0]["connected"], true);
    let out = dlconn(&["criterion", "--group", "A3", "--twist", "2A3", "--w", "0"]);
    let v = &lines(&out)[0];
    assert_eq!(v["irreducible"], false);
    assert_eq!(v["closure"], serde_json::json!([0, 2]));
}

#[test]
fn count_component_number() {
    let out = dlconn(&["count", "--group", "A3", "--twist", "2A3", "--w", "1", "--q", "2"]);
    assert!(out.status.success());
    let v = &lines(&out)[0];
    assert_eq!(v["component_count"], 45);
    assert_eq!(v["n_w_value"], 135);
    assert_eq!(v["n_w"], serde_json::json!([1, 1, 1, 2, 1, 1, 1]));
}

#[test]
fn verify_theorem_passes() {
    let out = dlconn(&["verify", "--realization", "GL3@q=2", "--check", "theorem", "--set", "0,1"]);
    assert!(out.status.success());
    let v = &lines(&out)[0];
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["parameters"]["components"], 1);
}

#[test]
fn verify_several_checks_in_order() {
    let out = dlconn(&["verify", "--realization", "GL2@q=2", "--check", "x1,fibers", "--check", "rational"]);
    assert!(out.status.success());
    let names: Vec<String> = lines(&out).iter().map(|v| v["check_name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["x1", "fibers", "rational"]);
}

#[test]
fn steinberg_report() {
    let out = dlconn(&["steinberg", "--group", "D4", "--twist", "3D4"]);
    assert!(out.status.success());
    let v = &lines(&out)[0];
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["parameters"]["fixed_coxeter_matrix"], serde_json::json!([[1, 6], [6, 1]]));
}

#[test]
fn output_is_deterministic_without_timing() {
    let args = ["verify", "--realization", "U3@q=2", "--check", "theorem,closure,x1", "--no-timing"];
    let a = dlconn(&args);
    let b = dlconn(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tsv_output() {
    let out = dlconn(&["verify", "--realization", "GL2@q=2", "--check", "rational", "--tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert!(rows[0].starts_with("check\tverdict"));
    assert!(rows[1].starts_with("rational\tpass\t"));
}

#[test]
fn inconclusive_only_fails_when_strict() {
    // X(s1) for U4@q=2 has no points over F_4.
    let args = ["verify", "--realization", "U4@q=2", "--check", "fibers", "--s", "0", "--level-cap", "1"];
    let out = dlconn(&args);
    assert!(out.status.success());
    assert_eq!(lines(&out)[0]["verdict"], "inconclusive");
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(dlconn(&strict).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["criterion", "--group", "A2"][..],
        &["criterion", "--group", "Q7", "--set", "0"],
        &["verify", "--realization", "GL9@q=2", "--check", "theorem"],
        &["verify", "--realization", "GL3@q=2", "--check", "nonsense"],
        &["verify", "--realization", "GL3@q=2", "--check", "descent", "--set", "0"],
        &["count", "--group", "A3", "--twist", "2A3", "--set", "0"],
    ] {
        let out = dlconn(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn flag_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dlconn"))
        .args(["verify", "--realization", "GL3@q=2", "--check", "rational"])
        .env("DLCONN_MAX_FLAGS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound 10"));
    let out = dlconn(&["verify", "--realization", "GL3@q=2", "--check", "rational", "--bound", "21"]);
    assert!(out.status.success());
}
