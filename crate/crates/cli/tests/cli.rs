use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn seqwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqwit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = seqwit(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bobs_after_two_and_three_alices() {
    let v = json(&["max-observers", "--alices", "2", "--bobs", "20", "--state", "bell"]);
    assert_eq!(v["bobs_detected"], 8);
    assert_eq!(v["engine"], "asymmetric");
    let v = json(&["max-observers", "--alices", "3", "--bobs", "20", "--state", "bell"]);
    assert_eq!(v["bobs_detected"], 5);
}

#[test]
fn supply_limited_count() {
    let v = json(&["max-observers", "--alices", "3", "--bobs", "1", "--state", "bell"]);
    assert_eq!(v["bobs_detected"], 1);
}

#[test]
fn symmetric_network() {
    let v = json(&["max-observers", "--alices", "5", "--bobs", "5"]);
    assert_eq!(v["engine"], "symmetric");
    assert_eq!(v["alices_detected"], 3);
    assert_eq!(v["stages"].as_array().unwrap().len(), 3);
    assert!(v["final_threshold"].as_f64().unwrap() > 1.0);
    let v = json(&["max-observers", "--alices", "2", "--bobs", "2", "--state", "werner", "--p", "0.3"]);
    assert_eq!(v["alices_detected"], 0);
}

#[test]
fn table1_csv_header() {
    let out = seqwit(&["compare", "--table", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,detectability,total_rom,eta_ebits"));
    let families: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(families, ["sequential", "werner", "colored", "pure"]);
}

#[test]
fn table2_sequential_rom() {
    let v = json(&["compare", "--table", "2"]);
    let rom = v["sequential"]["rom"].as_f64().unwrap();
    assert_eq!((rom * 100.0).round() / 100.0, 5.06);
    assert!(v.get("table1").is_none());
    assert_eq!(v["table2"].as_array().unwrap().len(), 3);
    let v = json(&["compare", "--table", "2", "--paper-rounding"]);
    assert_eq!(v["sequential"]["paper"]["rom"].as_f64(), Some(5.06));
    let v = json(&["compare", "--table", "2", "--precision", "3"]);
    assert_eq!(v["sequential"]["rom"].as_f64(), Some(5.06));
}

#[test]
fn unknown_table_is_usage_error() {
    assert_eq!(seqwit(&["compare", "--table", "3"]).status.code(), Some(2));
}

#[test]
fn witness_values() {
    let v = |args: &[&str]| -> f64 {
        let mut a = vec!["witness-eval"];
        a.extend_from_slice(args);
        json(&a)["expectation"].as_f64().unwrap()
    };
    assert_eq!(v(&["--state", "werner", "--p", "1", "--xi", "1", "--lambda", "1"]), -0.5);
    assert!(v(&["--state", "werner", "--p", "0.333333", "--xi", "1", "--lambda", "1"]).abs() < 1e-6);
    let colored = v(&["--state", "colored", "--p", "0.69", "--xi", "0.73", "--lambda", "0.73"]);
    assert!((colored - 0.25 * (1.0 - 0.5329 * 1.76)).abs() < 1e-6);
}

#[test]
fn witness_text_and_floor() {
    let out = seqwit(&["witness-eval", "--state", "werner", "--p", "1", "--format", "text"]);
    assert_eq!(stdout(&out), "-0.5\n");
    let v = json(&["witness-eval", "--samples", "2000", "--seed", "4"]);
    assert!(v["separability_floor"].as_f64().unwrap() >= -1e-10);
}

#[test]
fn out_of_range_parameters() {
    for args in [
        &["witness-eval", "--state", "werner", "--p", "1.5"][..],
        &["witness-eval", "--state", "pure", "--theta", "0.9"],
        &["witness-eval", "--xi", "0"],
        &["witness-eval", "--state", "werner"],
        &["max-observers", "--alices", "0"],
        &["max-observers", "--epsilon", "0.2"],
        &["compare", "--precision", "13"],
        &["witness-eval", "--samples", "0"],
        &["bogus"],
    ] {
        let out = seqwit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &["compare", "--paper-rounding"][..],
        &["compare", "--format", "csv"],
        &["witness-eval", "--samples", "500", "--seed", "9"],
        &["max-observers", "--alices", "1", "--bobs", "30", "--format", "text"],
    ] {
        assert_eq!(seqwit(args).stdout, seqwit(args).stdout, "{args:?}");
    }
}

#[test]
fn config_file_precedence() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "state = \"werner\"\np = 0.9\nformat = \"csv\"\nprecision = 3").unwrap();
    let path = file.path().to_str().unwrap();

    let out = seqwit(&["witness-eval", "--config", path]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("state,parameter,xi,lambda,expectation\nwerner,0.9,1,1,"));

    let v = json(&["witness-eval", "--config", path, "--format", "json", "--p", "1"]);
    assert_eq!(v["expectation"].as_f64(), Some(-0.5));
    assert_eq!(v["state"]["name"], "werner");

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "colour = \"red\"").unwrap();
    let out = seqwit(&["compare", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(seqwit(&["compare", "--config", "/nonexistent/seqwit.toml"]).status.code(), Some(2));
}

#[test]
fn library_entry_point() {
    let mut buf = Vec::new();
    seqwit_cli::run(["seqwit", "max-observers", "--alices", "1", "--bobs", "20"], &mut buf).unwrap();
    let v: Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v["bobs_detected"], 12);
    let err = seqwit_cli::run(["seqwit", "compare", "--table", "7"], &mut Vec::new()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
