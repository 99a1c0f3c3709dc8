use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mirrorstate"))
}

fn stdout_of(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn summary(text: &str) -> Value {
    let last = text.lines().last().unwrap();
    serde_json::from_str::<Value>(last).unwrap()["summary"].clone()
}

#[test]
fn build_and_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("z6.json");
    let (code, _) = stdout_of(&["build", "--family", "mirror", "--n", "3", "--method", "circuit", "--out", state.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, text) = stdout_of(&["analyze", "--state", state.to_str().unwrap(), "--entropy", "3", "--rank", "1,6"]);
    assert_eq!(code, 0);
    let records: Value = serde_json::from_str(&text).unwrap();
    let text = records.to_string();
    assert!(text.contains("entropy") && text.contains("rank"));
}

#[test]
fn teleport_emits_transcript_and_summary() {
    let (code, text) = stdout_of(&["teleport", "--n", "2", "--random", "4"]);
    assert_eq!(code, 0);
    assert!(text.lines().count() > 16);
    let s = summary(&text);
    assert!(s["min_fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
}

#[test]
fn sdc_decodes_message() {
    let (code, text) = stdout_of(&["sdc", "--n", "2", "--message", "0110"]);
    assert_eq!(code, 0);
    assert!(summary(&text).to_string().contains("0110"));
}

#[test]
fn qis_reports_bob_requirement() {
    let (code, text) = stdout_of(&["qis", "--seed", "2"]);
    assert_eq!(code, 0);
    let s = summary(&text);
    assert_eq!(s["success"], Value::Bool(true));
    assert_eq!(s["bob_required"], Value::Bool(true));
    let (code, text) = stdout_of(&["qis", "--channel", "bell-rearranged", "--layout", "1,2/3,4/5,6"]);
    assert_eq!(code, 0);
    assert_eq!(summary(&text)["bob_required"], Value::Bool(false));
}

#[test]
fn decohere_csv_and_critical_gamma_json() {
    let (code, text) = stdout_of(&["decohere", "--state", "mirror", "--gamma", "0.8,0.8,0.8,0.8"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 8);
    let (code, text) = stdout_of(&["critical-gamma", "--state", "bell-rearranged"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v.to_string().contains("\"gamma_crit\":null"));
}

#[test]
fn bad_input_is_usage_error() {
    assert_eq!(stdout_of(&["build", "--family", "mirror", "--n", "0"]).0, 2);
    assert_eq!(stdout_of(&["sdc", "--n", "2", "--message", "01"]).0, 2);
    assert_eq!(stdout_of(&["qis", "--layout", "1,2/3"]).0, 2);
}
