//! End-to-end checks of the binary: exit codes, output determinism,
//! and the reproducer loop. Everything runs against temp directories.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orthopair"))
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

const SYMPLECTIC_WS: &str = r#"{
  "ring": "QQ",
  "space": {"points": 1, "opens": [[], [0]]},
  "sheaves": {
    "E": {"ranks": {"1": 4}, "restrictions": {}}
  },
  "pairings": {
    "P": {"e": "E", "f": "E",
          "gram": {"1": [["0","1","0","0"],["-1","0","0","0"],["0","0","0","1"],["0","0","-1","0"]]},
          "flags": ["skew"]}
  },
  "submodules": {
    "F": {"sheaf": "E", "columns": {"1": [["1","0"],["0","0"],["0","1"],["0","0"]]}}
  },
  "matrices": {"M": [["2","4"],["6","8"]]}
}"#;

#[test]
fn validate_accepts_a_good_workspace() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(dir.path(), "ws.json", SYMPLECTIC_WS);
    let out = bin().arg("validate").arg(&ws).output().unwrap();
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["valid"], serde_json::json!(true));
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(dir.path(), "bad.json", "{not json");
    let out = bin().arg("validate").arg(&ws).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("PARSE_ERROR"));
    // The human diagnostic carries a location.
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = bin()
        .arg("validate")
        .arg("/nonexistent/nowhere.json")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn law_violations_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(
        dir.path(),
        "viol.json",
        r#"{
          "ring": "QQ",
          "space": {"points": 2, "opens": [[], [0], [0, 1]]},
          "sheaves": {
            "E": {"ranks": {"1": 1, "2": 1},
                  "restrictions": {"1>1": [["5"]], "2>1": [["1"]]}}
          }
        }"#,
    );
    let out = bin().arg("validate").arg(&ws).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("IdentityLaw"));
}

#[test]
fn a_non_topology_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(
        dir.path(),
        "top.json",
        r#"{"ring": "QQ", "space": {"points": 2, "opens": [[], [0]]}, "sheaves": {}}"#,
    );
    let out = bin().arg("validate").arg(&ws).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("INVALID_INPUT"));
}

#[test]
fn unknown_op_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(dir.path(), "ws.json", SYMPLECTIC_WS);
    let out = bin()
        .args(["compute"])
        .arg(&ws)
        .arg("transmogrify")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn duplicate_op_argument_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(dir.path(), "ws.json", SYMPLECTIC_WS);
    let out = bin()
        .args(["compute"])
        .arg(&ws)
        .args(["smith", "matrix=M", "matrix=M"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn compute_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(dir.path(), "ws.json", SYMPLECTIC_WS);
    let run = || {
        let out = bin()
            .args(["compute"])
            .arg(&ws)
            .args(["witt", "pairing=P", "iso=F"])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn witt_output_carries_verified_planes() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write(dir.path(), "ws.json", SYMPLECTIC_WS);
    let out = bin()
        .args(["compute"])
        .arg(&ws)
        .args(["witt", "pairing=P", "iso=F"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["plane_count"], serde_json::json!(2));
    assert_eq!(v["residual_rank"], serde_json::json!(0));
    assert_eq!(v["verified"], serde_json::json!(true));
    assert_eq!(v["planes"].as_array().unwrap().len(), 2);
}

#[test]
fn reproducers_retrigger_until_the_expectation_holds() {
    let dir = tempfile::tempdir().unwrap();
    let mut ws: serde_json::Value = serde_json::from_str(SYMPLECTIC_WS).unwrap();
    // A wrong prediction stands in for a genuine failure: the file must
    // keep exiting 1 until the recorded expectation matches reality.
    ws["repro"] = serde_json::json!({
        "op": "smith",
        "args": {"matrix": "M"},
        "expect": {"rank": 1}
    });
    let bad = write(dir.path(), "repro-bad.json", &ws.to_string());
    let out = bin()
        .args(["compute"])
        .arg(&bad)
        .arg("repro")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["matches"], serde_json::json!(false));

    ws["repro"]["expect"] = serde_json::json!({"rank": 2, "all_units": true});
    let good = write(dir.path(), "repro-good.json", &ws.to_string());
    let out = bin()
        .args(["compute"])
        .arg(&good)
        .arg("repro")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["matches"], serde_json::json!(true));
}

#[test]
fn prove_zero_cases_passes_vacuously() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["prove", "dimension", "--cases", "0"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("status=vacuous-pass"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nothing was checked"));
}

#[test]
fn prove_prints_one_summary_line_per_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["prove", "snf", "--cases", "20", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "suite=snf ring=ZZ cases=20 failures=0 status=pass\n"
    );
}

#[test]
fn prove_stdout_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = bin()
            .current_dir(dir.path())
            .args([
                "prove",
                "insertion",
                "--cases",
                "15",
                "--seed",
                "9",
                "--json",
            ])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn prove_refuses_integer_witt() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["prove", "witt", "--ring", "zz", "--cases", "5"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn prove_unknown_suite_is_a_usage_error() {
    let out = bin().args(["prove", "everything"]).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("available"));
}

#[test]
fn prove_json_report_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["prove", "partner", "--cases", "3", "--json"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], serde_json::json!(true));
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], serde_json::json!("partner"));
    assert_eq!(suites[0]["ring"], serde_json::json!("QQ"));
    assert_eq!(suites[0]["failures"], serde_json::json!([]));
}
