use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sp4(args: &[&str]) -> Output {
    sp4_env(args, None)
}

fn sp4_env(args: &[&str], config: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sp4"));
    c.args(args).env_remove("SP4_CONFIG");
    if let Some(p) = config {
        c.env("SP4_CONFIG", p);
    }
    c.output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

#[test]
fn cosets_s_alpha_bound_5_gives_ten_lines() {
    let o = sp4(&["cosets", "--cell", "s_alpha", "--bound", "5"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l["cell"] == "s_alpha" && l["v"].as_array().unwrap().len() == 10));
}

#[test]
fn ramanujan_trivial_sum() {
    let o = sp4(&["ramanujan", "--v1", "1", "--v12", "1", "--n1", "0", "--n2", "0"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["value"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["cosets", "--cell", "nope", "--bound", "3"][..],
        &["cosets", "--cell", "id", "--bound", "0"],
        &["eval", "--g", "1,2,3", "--nu", "8,6", "--bound", "3"],
        &["eval", "--g", "1,1", "--nu", "8+xi,6", "--bound", "3"],
        &["whittaker", "--frobnicate"],
        &["ramanujan", "--v1", "1"],
    ] {
        let o = sp4(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = sp4(&["cosets", "--cell", "id", "--bound", "0"]);
    assert!(json(&o)["error"]["message"].is_string());
}

#[test]
fn budget_exceedance_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"ramanujan_budget": 10}"#).unwrap();
    let o = sp4_env(&["ramanujan", "--v1", "6", "--v12", "6"], Some(&cfg));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "budget");
}

#[test]
fn config_from_env_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"quad_rel_tol": -1}"#).unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"format": "csv"}"#).unwrap();
    let args = ["ramanujan", "--v1", "2", "--v12", "2"];
    assert_eq!(sp4_env(&args, Some(&bad)).status.code(), Some(2));
    let with_flag = [&["--config", good.to_str().unwrap()][..], &args[..]].concat();
    let o = sp4_env(&with_flag, Some(&bad));
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("key,value\n"));
}

#[test]
fn csv_lines_output() {
    let o = sp4(&["--format", "csv", "cosets", "--cell", "s_beta", "--bound", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("cell,"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn verify_cosets_is_deterministic() {
    let a = sp4(&["verify", "--suite", "cosets"]);
    let b = sp4(&["verify", "--suite", "cosets"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["failed"], 0);
    assert!(r["passed"].as_u64().unwrap() > 0);
}

#[test]
fn fixtures_record_check_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let rec = sp4(&["fixtures", "--dir", d, "record", "--", "cosets", "--cell", "s_alpha", "--bound", "4"]);
    assert!(rec.status.success(), "{}", String::from_utf8_lossy(&rec.stderr));
    let name = json(&rec)["file"].as_str().unwrap().to_string();

    let ok = sp4(&["fixtures", "--dir", d, "check"]);
    assert!(ok.status.success());
    assert_eq!(json(&ok)["checked"], 1);

    // same bytes, different name: hash check fails
    let path = dir.path().join(&name);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(dir.path().join(format!("{}.json", "0".repeat(64))), &text).unwrap();
    let bad = sp4(&["fixtures", "--dir", d, "check"]);
    assert_eq!(bad.status.code(), Some(3));
    assert_eq!(json(&bad)["failed"], 1);
    std::fs::remove_file(dir.path().join(format!("{}.json", "0".repeat(64)))).unwrap();

    // edited output under a matching hash: the replay catches it
    let at = text.find("\"output\"").unwrap();
    let edited = format!("{}{}", &text[..at], text[at..].replacen("\"cell\": \"s_alpha\"", "\"cell\": \"s_beta\"", 1));
    assert_ne!(edited, text);
    let bytes = edited.into_bytes();
    std::fs::remove_file(&path).unwrap();
    use sha2::Digest;
    let hex: String = sha2::Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    std::fs::write(dir.path().join(format!("{hex}.json")), &bytes).unwrap();
    let changed = sp4(&["fixtures", "--dir", d, "check"]);
    assert_eq!(changed.status.code(), Some(3));
    assert_eq!(json(&changed)["results"][0]["status"], "output_changed");
}

#[test]
fn committed_fixtures_reproduce() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let o = sp4(&["fixtures", "--dir", dir.to_str().unwrap(), "check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(json(&o)["checked"].as_u64().unwrap() >= 3);
}

#[test]
fn timing_is_opt_in() {
    let plain = json(&sp4(&["ramanujan", "--v1", "3", "--v12", "2", "--n1", "1"]));
    assert!(plain.get("elapsed_ms").is_none());
    let timed = json(&sp4(&["--timing", "ramanujan", "--v1", "3", "--v12", "2", "--n1", "1"]));
    assert!(timed.get("elapsed_ms").is_some());
}
