use std::io::Write;
use std::process::{Command, Output};

use qcbound::report::{parse_csv, parse_json, COLUMNS};

fn qcbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcbound"))
        .args(args)
        .env_remove("QCBOUND_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn identity_example() {
    let o = qcbound(&[
        "verify-identity",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--x",
        "0.5",
        "--n",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].theorem_id, "L11");
    assert!(rows[0].measured <= 1e-9);
    assert!(rows.iter().all(|r| r.holds));
}

#[test]
fn bounds_example_with_trapezoid_rows() {
    let o = qcbound(&[
        "verify-bounds",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "2",
        "--p",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(text.lines().count(), rows.len() + 1);
    for id in ["T31", "C31", "T32"] {
        let r = rows
            .iter()
            .find(|r| r.theorem_id == id)
            .unwrap_or_else(|| panic!("missing {id}"));
        assert!(r.holds && r.hypothesis_ok);
    }
    let t31 = rows.iter().find(|r| r.theorem_id == "T31").unwrap();
    assert!((t31.bound - 0.226_523_485_704_920_42).abs() < 1e-15);
}

#[test]
fn failed_hypothesis_is_flagged_not_fatal() {
    let o = qcbound(&[
        "verify-bounds",
        "--expr",
        "sin(t)",
        "--a",
        "0",
        "--b",
        "3.14159",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = parse_json(&stdout(&o)).unwrap();
    assert!(rows.iter().any(|r| !r.hypothesis_ok));
    assert!(stderr(&o).contains("hypothesis"));
}

#[test]
fn json_has_the_csv_keys_in_order() {
    let o = qcbound(&[
        "verify-bounds",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = v.as_array().unwrap()[0].as_object().unwrap();
    let keys: Vec<&str> = first.keys().map(String::as_str).collect();
    assert_eq!(keys, COLUMNS);
    assert!(text.contains("\"measured\": 7.3926142786903279e-2"), "{text}");
}

#[test]
fn table_is_the_default_format() {
    let o = qcbound(&["verify-bounds", "--expr", "exp(t)", "--a", "0", "--b", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("theorem_id"));
    assert!(text.contains("note: T31 holds strictly"));
}

#[test]
fn input_errors_exit_3() {
    let cases: &[&[&str]] = &[
        &["verify-bounds", "--expr", "exp(", "--a", "0", "--b", "1", "--n", "2"],
        &["verify-bounds", "--expr", "foo(t)", "--a", "0", "--b", "1", "--n", "2"],
        &["verify-bounds", "--expr", "exp(t)", "--a", "1", "--b", "0", "--n", "2"],
        &["verify-bounds", "--expr", "exp(t)", "--a", "0", "--b", "1", "--n", "0"],
        &[
            "verify-bounds",
            "--expr",
            "exp(t)",
            "--a",
            "0",
            "--b",
            "1",
            "--n",
            "2",
            "--p",
            "2",
            "--q",
            "3",
        ],
        &[
            "verify-bounds",
            "--expr",
            "exp(t)",
            "--a",
            "0",
            "--b",
            "1",
            "--n",
            "2",
            "--p",
            "0.5",
        ],
        &[
            "verify-identity",
            "--expr",
            "exp(t)",
            "--a",
            "0",
            "--b",
            "1",
            "--x",
            "2",
            "--n",
            "1",
        ],
        &["verify-identity", "--a", "0", "--b", "1", "--n", "1"],
        &["no-such-command"],
    ];
    for args in cases {
        let o = qcbound(args);
        assert_eq!(o.status.code(), Some(3), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn parse_error_reports_offset() {
    let o = qcbound(&["verify-identity", "--expr", "exp(", "--a", "0", "--b", "1", "--n", "1"]);
    assert!(stderr(&o).contains("offset 4"), "{}", stderr(&o));
}

#[test]
fn domain_errors_exit_4() {
    let o = qcbound(&[
        "verify-identity",
        "--expr",
        "log(t)",
        "--a",
        "-1",
        "--b",
        "1",
        "--n",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("domain"));
}

#[test]
fn tolerance_from_environment() {
    let args = [
        "verify-identity",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "3",
        "--format",
        "csv",
    ];
    let strict = Command::new(env!("CARGO_BIN_EXE_qcbound"))
        .args(args)
        .env("QCBOUND_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(2));
    let relaxed = qcbound(&args);
    assert_eq!(relaxed.status.code(), Some(0));
    // an explicit flag wins over the environment
    let flagged = Command::new(env!("CARGO_BIN_EXE_qcbound"))
        .args(args)
        .args(["--tol", "1e-8"])
        .env("QCBOUND_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(flagged.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_qcbound"))
        .args(args)
        .env("QCBOUND_TOL", "tiny")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let o = qcbound(&[
        "verify-bounds",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "2",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let rows = parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 7);

    let missing = dir.path().join("no/such/dir/report.csv");
    let o = qcbound(&[
        "verify-bounds",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "2",
        "--output",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn tightness_rows() {
    let o = qcbound(&[
        "tightness",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = parse_csv(&stdout(&o)).unwrap();
    let ids: Vec<&str> = rows.iter().map(|r| r.theorem_id.as_str()).collect();
    assert_eq!(ids, ["T21", "T22", "T23", "T22", "T23", "T32"]);
    assert!(rows.iter().all(|r| r.holds && r.slack_ratio >= 1.0));
    // the searched x beats the midpoint for T21
    let mid = qcbound(&[
        "verify-bounds",
        "--expr",
        "exp(t)",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "2",
        "--format",
        "csv",
    ]);
    let t21_mid = parse_csv(&stdout(&mid))
        .unwrap()
        .into_iter()
        .find(|r| r.theorem_id == "T21")
        .unwrap();
    assert!(rows[0].bound <= t21_mid.bound);
}

#[test]
fn corpus_report_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# name; expr; a; b").unwrap();
    writeln!(file, "quad; t^2; -1; 1").unwrap();
    writeln!(file, "wave; sin(t); 0; 3.14159  # not quasi-convex at even orders").unwrap();
    let o = qcbound(&[
        "corpus-report",
        "--corpus-file",
        file.path().to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = parse_csv(&stdout(&o)).unwrap();
    assert!(rows.iter().any(|r| r.theorem_id == "L11"));
    assert!(rows.iter().any(|r| r.theorem_id == "T32"));
    assert!(rows.iter().any(|r| !r.hypothesis_ok));
    assert!(rows.iter().all(|r| !r.hypothesis_ok || r.holds));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "broken; t^; 0; 1").unwrap();
    let o = qcbound(&["corpus-report", "--corpus-file", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn builtin_corpus_report_passes() {
    let o = qcbound(&["corpus-report", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = parse_csv(&stdout(&o)).unwrap();
    assert!(rows.len() > 1000);
    assert!(rows.iter().all(|r| !r.hypothesis_ok || r.holds));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(qcbound(&["--help"]).status.code(), Some(0));
    assert_eq!(qcbound(&["--version"]).status.code(), Some(0));
    assert!(stdout(&qcbound(&["verify-bounds", "--help"])).contains("--expr"));
}

#[test]
fn negative_interval_endpoints_parse() {
    let o = qcbound(&[
        "verify-identity",
        "--expr",
        "t^4",
        "--a",
        "-2",
        "--b",
        "-0.5",
        "--n",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
