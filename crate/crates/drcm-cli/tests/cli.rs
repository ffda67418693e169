use std::process::{Command, Output};

use serde_json::Value;

fn drcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drcm")).args(args).env_remove("DRCM_PREC").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = drcm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "drcm/1");
    v["result"].clone()
}

#[test]
fn drmonoid_gaussian_two() {
    let r = json(&["drmonoid", "-d", "1", "-f", "(2)"]);
    assert_eq!(r["elements"].as_array().unwrap().len(), 3);
    assert_eq!(r["size"], 3);
}

#[test]
fn theta_at_i() {
    let r = json(&["theta", "-g", "1", "--tau", "i", "--k", "0", "--u", "0", "--prec", "128"]);
    assert!(r["value"]["re"].as_str().unwrap().starts_with("1.0864348112"));
}

#[test]
fn classgroup_minus_twenty() {
    let r = json(&["classgroup", "-d", "5"]);
    assert_eq!(r["divisors"], serde_json::json!([2]));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_drcm")).args(["theta"]).env("DRCM_PREC", "96").output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["prec"], 96);
}

#[test]
fn exit_codes() {
    assert_eq!(drcm(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(drcm(&["drmonoid", "-f", "[2,1]"]).status.code(), Some(1));
    assert_eq!(drcm(&["theta", "--tau", "0.01i", "--prec", "64"]).status.code(), Some(6));
    assert_eq!(drcm(&["theta", "--prec", "8"]).status.code(), Some(6));
    assert_eq!(drcm(&["classgroup", "--format", "csv"]).status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    let args = ["mvector-build", "-d", "1", "-N", "3", "--a", "0,1/3", "--prec", "192"];
    assert_eq!(drcm(&args).stdout, drcm(&args).stdout);
}

#[test]
fn every_command_has_a_schema() {
    for cmd in [
        "field-info",
        "classgroup",
        "rayclassgroup",
        "drmonoid",
        "theta",
        "classical",
        "mvector-build",
        "mvector-verify",
        "simn-compare",
        "duality-check",
        "cmpoint",
    ] {
        let out = drcm(&[cmd, "--schema"]);
        assert!(out.status.success(), "{cmd}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["properties"]["command"]["const"], cmd);
        assert!(v["properties"]["result"]["type"].is_string(), "{cmd}");
    }
}

#[test]
fn csv_and_out_file() {
    let dir = std::env::temp_dir().join(format!("drcm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v.csv");
    let out = drcm(&["mvector-build", "-N", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("class,orbit,degree,minpoly,flags"));
    assert_eq!(lines.count(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verification_commands_pass() {
    let r = json(&["mvector-verify", "-d", "1", "-N", "3", "--a", "0,1/3"]);
    assert_eq!(r["pass"], true);
    let r = json(&["simn-compare", "-d", "1", "-N", "2", "--prec", "192"]);
    assert_eq!(r["pass"], true);
    let r = json(&["duality-check", "-d", "1", "-N", "6"]);
    assert_eq!(r["failures"], serde_json::json!([]));
    let r = json(&["cmpoint", "--preset", "gaussian", "--prec", "128"]);
    assert_eq!(r["delta"]["d"], serde_json::json!([1]));
}

#[test]
fn field_info_and_classical() {
    let r = json(&["field-info", "-d", "3"]);
    assert_eq!(r["units"], 6);
    assert_eq!(r["disc"], -3);
    let r = json(&["classical", "--kind", "j", "--tau", "i", "--prec", "128"]);
    assert!(r["value"]["re"].as_str().unwrap().starts_with("1728.0000"));
    let r = json(&["rayclassgroup", "-d", "1", "-N", "3"]);
    assert_eq!(r["divisors"], serde_json::json!([2]));
}
