use std::process::{Command, Output};

fn wlsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlsi")).args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn cd_check_above_threshold_passes() {
    let out = wlsi(&["cd-check", "--n", "1", "--beta", "1", "--sigma", "7.389056"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = lines(&out);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["pass"] != false));
}

#[test]
fn cd_check_below_threshold_fails_with_witness() {
    let out = wlsi(&["cd-check", "--n", "1", "--beta", "1", "--sigma", "2.718282"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fail "));
    assert!(lines(&out).iter().any(|r| r["pass"] == false));
}

#[test]
fn lower_bound_near_two() {
    let out = wlsi(&["lower-bound", "--n", "1", "--beta", "1", "--sigma", "7.389056"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&out);
    let v = rows[0]["value"].as_f64().unwrap();
    assert!((v - 2.0).abs() < 0.02, "{v}");
}

#[test]
fn parameter_and_usage_errors_exit_two() {
    assert_eq!(wlsi(&["cd-check", "--beta", "0.25"]).status.code(), Some(2));
    assert_eq!(wlsi(&["lower-bound", "--sigma", "1"]).status.code(), Some(2));
    assert_eq!(wlsi(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(wlsi(&["cd-check", "--bogus"]).status.code(), Some(2));
}

#[test]
fn json_lines_are_reproducible() {
    let args = ["gamma2-verify", "--samples", "20", "--seed", "7"];
    let a = wlsi(&args);
    let b = wlsi(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = lines(&a);
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r["seed"] == 7));
}

#[test]
fn samples_are_reproducible() {
    let args = ["sample", "--n", "2", "--beta", "2", "--samples", "50", "--seed", "3"];
    let a = wlsi(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, wlsi(&args).stdout);
    assert_eq!(lines(&a).len(), 50);
}

#[test]
fn csv_header_and_out_file() {
    let dir = std::env::temp_dir().join(format!("wlsi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = wlsi(&[
        "cd-check",
        "--beta",
        "1",
        "--sigma",
        "7.389056",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("check_id,n,beta,sigma,weight,value,bound,slack,pass,seed\n"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_echoed_to_stderr() {
    let out = wlsi(&["cd-check", "--beta", "1", "--sigma", "7.389056", "--format", "table"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("config {"), "{err}");
    assert!(err.contains("summary checks="));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("check_id"));
}
