//! Runs the built binary against fixture and generated instance files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::NamedTempFile;

use tensorcert::construct::{random_decomposition, DEFAULT_BOX};
use tensorcert::instance::InstanceFile;
use tensorcert::report::parse_certificate;
use tensorcert::MultiShape;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tensorcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensorcert"))
        .args(args)
        .env_remove("TENSORCERT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_json(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn certify_3x4x6_fixture() {
    let input = fixture("ex346.json");
    let o = tensorcert(&["certify", "--input", input.to_str().unwrap(), "--partition", "1,2/3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("rank = cactus rank = 6 [flattening exact rank]"));
}

#[test]
fn kruskal_does_not_apply_to_fixture() {
    let input = fixture("ex346.json");
    let o = tensorcert(&["kruskal", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("condition: 13 >= 14: FAIL"));
}

#[test]
fn compare_reports_flattening_only() {
    let input = fixture("ex346.json");
    let o = tensorcert(&["compare", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("flattening certifies, Kruskal does not: true"));
}

#[test]
fn json_certificate_round_trips() {
    let input = fixture("ex346.json");
    let o = tensorcert(&["identifiability", "--input", input.to_str().unwrap(), "--format", "json"]);
    let cert = parse_certificate(&stdout(&o)).unwrap();
    assert_eq!(o.status.code(), Some(if cert.is_certified() { 0 } else { 1 }));
}

#[test]
fn mismatched_tensor_is_invalid() {
    let text = r#"{"dims": [2, 2], "points": [[["1", "0"], ["1", "2"]]], "tensor": ["1", "2", "0", "1"]}"#;
    let f = temp_json(text);
    let o = tensorcert(&["certify", "--input", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[invalid]:"));
}

#[test]
fn malformed_json_is_a_parse_error() {
    let f = temp_json(r#"{"dims": [2, 2], "points": [[["1", "zero"]]]}"#);
    let o = tensorcert(&["certify", "--input", path(&f)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[parse]:"));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(tensorcert(&["certify"]).status.code(), Some(2));
    assert_eq!(tensorcert(&["frobnicate"]).status.code(), Some(2));
    let help = tensorcert(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("survey"));
}

#[test]
fn pinning_marks_assertions() {
    let shape = MultiShape::new(vec![2, 2, 5]).unwrap();
    let inst = random_decomposition(&shape, 6, DEFAULT_BOX, 36).unwrap();
    let file = InstanceFile::from_decomposition(&inst.set, &inst.weights, Some(&inst.tensor));
    let f = temp_json(&file.to_json());
    let o = tensorcert(&["pin", "--input", path(&f), "--families", "1,2:1,2:3", "--assert-quasi-general"]);
    let out = stdout(&o);
    assert!(out.contains("F1 quasi-general: ASSERTED (not verified)"));
    assert!(out.contains("F3 r < M_F: FAIL [6 < 6]"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn augment_output_is_a_valid_instance() {
    let input = fixture("ex346.json");
    let o = tensorcert(&["augment", "--input", input.to_str().unwrap(), "--seed", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let value: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let file = InstanceFile::parse(&value["instance"].to_string()).unwrap();
    let d = file.decomposition().unwrap();
    assert_eq!(d.set.len(), 7);
}

#[test]
fn seed_comes_from_environment_unless_overridden() {
    let input = fixture("ex346.json");
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tensorcert"));
        cmd.args(["augment", "--input", input.to_str().unwrap()]).env_remove("TENSORCERT_SEED");
        if let Some(seed) = env {
            cmd.env("TENSORCERT_SEED", seed);
        }
        if let Some(seed) = flag {
            cmd.args(["--seed", seed]);
        }
        stdout(&cmd.output().unwrap())
    };
    assert_eq!(run(Some("9"), None), run(None, Some("9")));
    assert_eq!(run(Some("5"), Some("9")), run(None, Some("9")));
}

#[test]
fn symmetric_and_intersection_commands() {
    let sym = temp_json(r#"{"symmetric": {"n": 1, "k": 4, "points": [["1", "2"], ["1", "-1"]]}}"#);
    let o = tensorcert(&["comon", "--input", path(&sym)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("rank = symmetric rank = cactus rank = 2"));

    let a = temp_json(r#"{"dims": [2, 2], "points": [[["1", "2"], ["1", "-3"]], [["1", "5"], ["2", "1"]]]}"#);
    let b = temp_json(r#"{"dims": [2, 2], "points": [[["1", "5"], ["2", "1"]], [["3", "-1"], ["1", "7"]]]}"#);
    let o = tensorcert(&["bb-check", "--input", path(&a), "--against", path(&b)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn survey_table_and_json() {
    let o = tensorcert(&["survey", "--shapes", "2x2x2", "--ranks", "1-2", "--trials", "5", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("seed 1 box 9\n"));
    assert_eq!(text.lines().count(), 4);
    let o = tensorcert(&["survey", "--shapes", "2x2x2", "--ranks", "2", "--trials", "5", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(value["rows"][0]["trials"], 5);
}

#[test]
fn obstruct_staples_non_redundancy() {
    let input = fixture("ex346.json");
    let o = tensorcert(&["obstruct", "--input", input.to_str().unwrap(), "--x", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("== non-redundancy ==\n"));
    assert!(text.contains("== obstruction ==\n"));
    assert!(text.contains("(m'+1)^(k-x) >= r: PASS [9 >= 6]"));

    let o = tensorcert(&["obstruct", "--input", input.to_str().unwrap(), "--x", "1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["non_redundant", "obstruction"] {
        let cert = parse_certificate(&value[key].to_string()).unwrap();
        assert!(cert.is_certified(), "{key}");
    }
}
