use std::path::Path;
use std::process::{Command, Output};

use fdx_core::io::{parse_scenario, scenario_to_json};
use fdx_core::library;
use serde_json::{json, Value};

fn fdx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdx"))
        .args(args)
        .env_remove("FDX_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn region_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(dir.path(), "s4.json", &scenario_to_json(&library::s4()));
    let o = fdx(&["region", "--in", &path, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["vertices"],
        json!([
            ["0", "0"],
            ["1", "0"],
            ["1", "8/5"],
            ["3/5", "2"],
            ["0", "2"]
        ])
    );
    assert_eq!(
        v["hd_vertices"],
        json!([["0", "0"], ["1", "0"], ["0", "2"]])
    );
    assert_eq!(v["fdp_vertices"], v["vertices"]);
    assert_eq!(v["bounds"]["d_sum_max"], "13/5");
    assert_eq!(v["corners"]["prime"], json!(["1", "8/5"]));
    assert_eq!(v["classification"], "HD<FD=FD'");
}

#[test]
fn region_case_a() {
    let o = fdx(&[
        "region", "--case", "a", "--l-bs", "1", "--l-usr", "0.5", "--psi", "0,1", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let fd: Vec<&str> = text.lines().filter(|l| l.starts_with("fd,")).collect();
    assert_eq!(
        fd,
        [
            "fd,0,0,0.000000,0.000000",
            "fd,1,0,1.000000,0.000000",
            "fd,0,1,0.000000,1.000000"
        ]
    );
}

#[test]
fn negative_interval_arguments() {
    let o = fdx(&[
        "compare",
        "--case",
        "b",
        "--l",
        "1/2",
        "--psi-fwd",
        "-1/2,1/2",
        "--psi-back",
        "0,1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d_sum_fd"], "2");
}

#[test]
fn missing_file_names_path() {
    let o = fdx(&["region", "--in", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/scenario.json"));
}

#[test]
fn parse_errors_name_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(
        dir.path(),
        "bad.json",
        &json!({"l_t1": 1, "l_t2": "one", "l_r1": 1, "l_r2": 1}),
    );
    let o = fdx(&["dims", "--in", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("l_t2"), "{}", stderr(&o));
}

#[test]
fn invalid_scenario_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(
        dir.path(),
        "invalid.json",
        &json!({"l_t1": 1, "l_t2": 1, "l_r1": -1, "l_r2": 1, "psi_t11": [[0.5, 0.25]]}),
    );
    let o = fdx(&["region", "--in", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("l_r1") && err.contains("psi_t11"), "{err}");
}

#[test]
fn verify_s4_passes() {
    let o = fdx(&["verify", "--case", "s4", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));
}

#[test]
fn verify_corrupted_analytic_value() {
    let o = fdx(&[
        "verify",
        "--case",
        "s4",
        "--trials",
        "3",
        "--corrupt-analytic",
        "rank_h12",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["max_rank_gap"].as_u64().unwrap() > 0);
}

#[test]
fn verify_picks_density_automatically() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(
        dir.path(),
        "sevenths.json",
        &json!({
            "l_t1": 1, "l_t2": 1, "l_r1": "1/2", "l_r2": 1,
            "psi_t11": [["0", "3/7"]], "psi_r11": [["0", "5/7"]],
            "psi_t22": [["-1", "-1/7"]], "psi_r22": [["-6/7", "0"]],
            "psi_t12": [["-2/7", "1/7"]], "psi_r12": [["1/7", "4/7"]],
            "psi_t21": [["2/7", "1"]], "psi_r21": [["-1", "-4/7"]]
        }),
    );
    let o = fdx(&["verify", "--in", &path, "--trials", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["grid_density"].as_u64().unwrap() % 7, 0);
}

#[test]
fn verify_rejects_non_integral_density() {
    let o = fdx(&["verify", "--case", "s4", "--density", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("try 10"), "{}", stderr(&o));
}

#[test]
fn verify_seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fdx"))
        .args([
            "verify", "--case", "s4", "--trials", "2", "--format", "json",
        ])
        .env("FDX_SEED", "5")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 5);
}

#[test]
fn overlap_sweep_csv() {
    let o = fdx(&["sweep", "--overlap", "--l", "0.5", "--steps", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(
        lines[0],
        "param,d1_max,d2_max,d_sum_fd,d_sum_fdp,class,rect_fd"
    );
    assert_eq!(lines[6], "1/2,1,1,2,2,HD<FD=FD',true");
    assert_eq!(lines[7], "3/5,1,1,9/5,9/5,HD<FD=FD',false");
    assert_eq!(lines[11], "1,1,1,1,1,HD=FD=FD',false");
}

#[test]
fn length_sweep_csv() {
    let o = fdx(&["sweep", "--length", "--l-usr", "0.5", "--l-bs", "0.5,1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[3] == "1"));
    assert_eq!(
        rows.iter().map(|r| r[4]).collect::<Vec<_>>(),
        ["1", "2", "2"]
    );
}

#[test]
fn sweep_bad_range() {
    assert_eq!(
        fdx(&["sweep", "--overlap", "--steps", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        fdx(&["sweep", "--length", "--l-bs", "2,1"]).status.code(),
        Some(1)
    );
    assert_eq!(fdx(&["sweep"]).status.code(), Some(1));
}

#[test]
fn emitted_scenario_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = fdx(&[
        "region",
        "--case",
        "c",
        "--l-bs",
        "2/3",
        "--l-usr",
        "1/4",
        "--psi-fwd",
        "-1,0;1/2,1",
        "--psi-back",
        "-1/3,2/3",
        "--format",
        "json",
    ]);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let v: Value = serde_json::from_str(&stdout(&first)).unwrap();
    let emitted = v["scenario"].clone();
    let path = write_json(dir.path(), "emitted.json", &emitted);
    let second = fdx(&["region", "--in", &path, "--format", "json"]);
    assert_eq!(stdout(&first), stdout(&second));
    let original = parse_scenario(&emitted.to_string()).unwrap();
    assert_eq!(scenario_to_json(&original), emitted);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dims.csv");
    let o = fdx(&[
        "dims",
        "--case",
        "s4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("null_h12,8/5,1.600000"));
}

#[test]
fn corners_and_dims_text() {
    let o = fdx(&["corners", "--case", "s4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("agree: true"));
    let row: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("double_prime "))
        .unwrap()
        .split_whitespace()
        .collect();
    assert_eq!(row[1..3], ["3/5", "2"]);
    let o = fdx(&["dims", "--case", "s1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"]["rank_h12"], "2");
}

#[test]
fn help_exits_zero() {
    let o = fdx(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}
