//! End-to-end behavior of the binary: exit codes, flag handling, format
//! equivalence.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/fig1.ndjson")
}

fn depgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on_fixture(args: &[&str]) -> Output {
    let fixture = fixture();
    let mut full = args.to_vec();
    let f = fixture.to_str().unwrap().to_owned();
    full.push("--input");
    full.push(Box::leak(f.into_boxed_str()));
    depgraph(&full)
}

#[test]
fn summary_prints_the_fixture_aggregate() {
    let out = run_on_fixture(&["summary"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("active"));
    assert!(stdout.contains("total"));
    let active_line = stdout
        .lines()
        .find(|l| l.starts_with("active"))
        .expect("active row");
    assert!(active_line.split_whitespace().any(|t| t == "3"));
}

#[test]
fn stats_handles_empty_input_with_explicit_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.ndjson");
    std::fs::write(&empty, "").unwrap();
    let out = depgraph(&[
        "stats",
        "--input",
        empty.to_str().unwrap(),
        "--snapshot",
        "2018-09-06",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("vertices: 0"));
    assert!(stdout.contains("dep-edges: 0"));

    // without a snapshot the same input is a data error
    let out = depgraph(&["stats", "--input", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    // no input
    let out = depgraph(&["summary"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown subcommand
    let out = depgraph(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    // bad numeric flags
    for args in [
        vec!["summary", "--damping", "1.5"],
        vec!["summary", "--damping", "0"],
        vec!["summary", "--tol", "-1"],
        vec!["summary", "--max-iter", "0"],
        vec!["summary", "--bins", "0"],
        vec!["summary", "--min-versions", "10", "--max-versions", "5"],
        vec!["summary", "--snapshot", "06-09-2018"],
    ] {
        let out = run_on_fixture(&args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
    // --out required for report subcommands
    let out = run_on_fixture(&["versions"]);
    assert_eq!(out.status.code(), Some(1));

    // help and version print cleanly
    let out = depgraph(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = depgraph(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn data_errors_exit_two() {
    let out = depgraph(&["stats", "--input", "/nonexistent/nowhere.ndjson"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ndjson");
    std::fs::write(&bad, "{\"kind\":\"artifact\"}\n").unwrap();
    let out = depgraph(&["stats", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 1"), "stderr: {stderr}");

    // strict policy trips on the missing target
    let strict = dir.path().join("strict.ndjson");
    std::fs::write(
        &strict,
        "{\"kind\":\"artifact\",\"g\":\"x\",\"a\":\"y\",\"v\":\"1.0\",\"released\":\"2018-01-01\"}\n\
         {\"kind\":\"dep\",\"from\":\"x:y:1.0\",\"to\":\"x:gone:1.0\"}\n",
    )
    .unwrap();
    let out = depgraph(&[
        "stats",
        "--input",
        strict.to_str().unwrap(),
        "--on-missing",
        "strict",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // skip policy downgrades it to a warning
    let out = depgraph(&[
        "stats",
        "--input",
        strict.to_str().unwrap(),
        "--on-missing",
        "skip",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("warning"), "stderr: {stderr}");
}

#[test]
fn literal_divergence_exits_three_and_normalized_recovers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dense.ndjson");
    let mut text = String::new();
    for a in ["u", "v", "w"] {
        text.push_str(&format!(
            "{{\"kind\":\"artifact\",\"g\":\"x\",\"a\":\"{a}\",\"v\":\"1.0\",\"released\":\"2018-01-01\"}}\n"
        ));
    }
    for (a, b) in [
        ("u", "v"),
        ("v", "u"),
        ("u", "w"),
        ("w", "u"),
        ("v", "w"),
        ("w", "v"),
    ] {
        text.push_str(&format!(
            "{{\"kind\":\"dep\",\"from\":\"x:{a}:1.0\",\"to\":\"x:{b}:1.0\"}}\n"
        ));
    }
    std::fs::write(&path, text).unwrap();

    let out_dir = dir.path().join("rpt");
    let out = depgraph(&[
        "versions",
        "--input",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("normalized"), "stderr: {stderr}");

    let out = depgraph(&[
        "versions",
        "--input",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--mode",
        "normalized",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn csv_and_json_report_the_same_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on_fixture(&["versions", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_on_fixture(&[
        "versions",
        "--out",
        dir.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let csv_text = std::fs::read_to_string(dir.path().join("versions.csv")).unwrap();
    let json_text = std::fs::read_to_string(dir.path().join("versions.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&json_text).unwrap();
    let rows = json.as_array().unwrap();
    let csv_lines: Vec<&str> = csv_text.lines().collect();
    assert_eq!(rows.len(), csv_lines.len() - 1);
    assert_eq!(rows.len(), 9);

    // spot-check one full row both ways
    let d1_csv = csv_lines
        .iter()
        .find(|l| l.starts_with("acme:d:1.0"))
        .unwrap();
    assert!(d1_csv.contains("0.513375"));
    let d1_json = rows
        .iter()
        .find(|r| r["coordinate"] == "acme:d:1.0")
        .unwrap();
    assert_eq!(d1_json["pop_v"].as_f64().unwrap(), 0.513375);
    assert_eq!(d1_json["positional_index"], serde_json::Value::Null);
    assert_eq!(d1_json["status"], "active");
}

#[test]
fn study_filter_restricts_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on_fixture(&[
        "libraries",
        "--out",
        dir.path().to_str().unwrap(),
        "--study-subjects",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("libraries.csv")).unwrap();
    // no fixture library reaches five versions
    assert_eq!(text.lines().count(), 1);

    let out = run_on_fixture(&[
        "libraries",
        "--out",
        dir.path().to_str().unwrap(),
        "--study-subjects",
        "--min-versions",
        "2",
        "--max-versions",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("libraries.csv")).unwrap();
    assert_eq!(text.lines().count(), 4); // header + a, b, c
}

#[test]
fn scope_exclusion_drops_edges() {
    let out = run_on_fixture(&["stats", "--exclude-scopes", "compile"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("dep-edges: 3"), "stdout: {stdout}");
}

#[test]
fn thread_count_does_not_change_output() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let out = run_on_fixture(&[
        "versions",
        "--out",
        d1.path().to_str().unwrap(),
        "--threads",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_on_fixture(&[
        "versions",
        "--out",
        d2.path().to_str().unwrap(),
        "--threads",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read(d1.path().join("versions.csv")).unwrap();
    let b = std::fs::read(d2.path().join("versions.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn strict_timeliness_flag_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on_fixture(&[
        "versions",
        "--out",
        dir.path().to_str().unwrap(),
        "--strict-timeliness",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("versions.csv").exists());
}

#[test]
fn hist_popular_metric_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on_fixture(&[
        "hist",
        "--metric",
        "positional-popular",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    assert_eq!(text.lines().count(), 31); // header + 30 bins
}

#[test]
fn csv_input_is_accepted() {
    let csv = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/fig1.csv");
    let out = depgraph(&["stats", "--input", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("vertices: 9"));
    assert!(stdout.contains("dep-edges: 5"));
}

#[test]
fn multiple_inputs_concatenate() {
    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("extra.ndjson");
    std::fs::write(
        &extra,
        "{\"kind\":\"artifact\",\"g\":\"other\",\"a\":\"z\",\"v\":\"1.0\",\"released\":\"2018-01-01\"}\n",
    )
    .unwrap();
    let fixture = fixture();
    let out = depgraph(&[
        "stats",
        "--input",
        fixture.to_str().unwrap(),
        "--input",
        extra.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("vertices: 10"));
    assert!(stdout.contains("libraries: 5"));
}
