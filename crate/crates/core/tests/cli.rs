use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use maxspec::cli::{SpectrumOutput, TraceOutput};
use maxspec::inequalities::{pinned_fixtures, Fixture};
use maxspec::io::load_matrix;
use maxspec::spectrum::spectrum;
use maxspec::CheckReport;
use tempfile::TempDir;

fn maxspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_of_limit_matrix() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "a.csv", "1,0\n0,2\n");
    let o = maxspec(&["spectrum", "--input", s(&p), "--eigenvectors"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("sigma_max  = {1, 2}"), "{text}");
    assert!(text.contains("sigma_dist = {1, 2}"), "{text}");
    assert_eq!(text.matches("eigenvector").count(), 4);
}

#[test]
fn spectrum_of_zero_matrix() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "z.json",
        r#"{"n": 3, "rows": [[0,0,0],[0,0,0],[0,0,0]]}"#,
    );
    let o = maxspec(&["spectrum", "--input", s(&p), "--eigenvectors"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("sigma_max  = {0}") && text.contains("sigma_dist = {0}"),
        "{text}"
    );
}

#[test]
fn spectrum_json_round_trip() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "r.csv",
        "0.3,2.5,0,1e-3\n0,1.7,4,0\n0.2,0,0,0\n0,0,9.5,0.125\n",
    );
    let o = maxspec(&["spectrum", "--json", "--input", s(&p), "--eigenvectors"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let parsed: SpectrumOutput = serde_json::from_str(line.trim()).unwrap();
    let direct = spectrum(&load_matrix(&p).unwrap()).unwrap();
    assert_eq!(parsed.profile, direct);
    assert!(parsed
        .eigenvectors
        .iter()
        .all(|e| e.residual.unwrap() < 1e-9));
}

#[test]
fn schur_trace_on_diagonal() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "d.csv", "2,0\n0,3\n");
    let o = maxspec(&[
        "asymptotics",
        "schur",
        "--index",
        "2",
        "--input",
        s(&p),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let t: TraceOutput = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(t.trace.values.len(), 11);
    assert!(t.trace.values.iter().all(|&v| (v - 3.0).abs() < 1e-12));
}

#[test]
fn classical_power_trace_is_constant() {
    let dir = TempDir::new().unwrap();
    let third = 1.0f64 / 3.0;
    let p = write(&dir, "c.csv", &format!("0,{third:?}\n{third:?},0\n"));
    let o = maxspec(&[
        "asymptotics",
        "classpow",
        "--index",
        "1",
        "--input",
        s(&p),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let t: TraceOutput = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(t.trace.values.iter().all(|&v| (v - third).abs() < 1e-12));
}

#[test]
fn bapat_text_shows_pass() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "b.csv",
        "0.5,2,0.1,0,1\n0,0.3,1.5,0,0\n1,0,0,2,0\n0,0.7,0,0.4,0\n3,0,0,0,0.2\n",
    );
    let o = maxspec(&["asymptotics", "bapat", "--input", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn calculus_reports() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "m.csv", "0.2,0.5\n0.1,0.3\n");
    for series in ["exp", "cosh", "sinh", "geom:2", "coeffs:1,0.5,0.25"] {
        let o = maxspec(&["calculus", "--series", series, "--input", s(&p), "--json"]);
        assert_eq!(o.status.code(), Some(0), "{series}");
        let reports: Vec<CheckReport> = stdout(&o)
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(reports.len(), 2);
    }
    let o = maxspec(&["calculus", "--series", "geom:0.1", "--input", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not applicable"));
}

#[test]
fn verify_default_passes_and_json_is_line_per_report() {
    let o = maxspec(&["verify", "--trials", "40", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let o = maxspec(&["verify", "--trials", "40", "--seed", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut keys = 0;
    for line in text.lines() {
        let r: CheckReport = serde_json::from_str(line).unwrap();
        assert!(!r.key.is_empty());
        keys += 1;
    }
    assert!(keys > 40 * 20);
    // Same seed, same output.
    assert_eq!(
        text,
        stdout(&maxspec(&[
            "verify", "--trials", "40", "--seed", "3", "--json"
        ]))
    );
}

#[test]
fn corrupted_fixture_exits_1() {
    let dir = TempDir::new().unwrap();
    let mut fixtures = pinned_fixtures();
    fixtures[0].expect_violation = !fixtures[0].expect_violation;
    let p = write(&dir, "fx.json", &serde_json::to_string(&fixtures).unwrap());
    let o = maxspec(&["verify", "--trials", "5", "--fixtures", s(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH"));

    let good: Vec<Fixture> = pinned_fixtures();
    let p = write(&dir, "ok.json", &serde_json::to_string(&good).unwrap());
    assert_eq!(
        maxspec(&["verify", "--trials", "5", "--fixtures", s(&p)])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn verify_with_inputs_runs_registry_rows() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "1,2\n0.5,0.1\n");
    let b = write(&dir, "b.csv", "0.3,1\n4,0\n");
    let o = maxspec(&[
        "verify",
        "--trials",
        "2",
        "--json",
        "--input",
        s(&a),
        "--input",
        s(&b),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""key":"jordan_triple""#));
}

#[test]
fn usage_and_io_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        maxspec(&["spectrum", "--input", "/nonexistent/m.csv"])
            .status
            .code(),
        Some(2)
    );
    let neg = write(&dir, "neg.csv", "1,-1\n0,1\n");
    let o = maxspec(&["spectrum", "--input", s(&neg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let ok = write(&dir, "ok.csv", "1,0\n0,1\n");
    assert_eq!(
        maxspec(&["asymptotics", "schur", "--index", "3", "--input", s(&ok)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        maxspec(&["calculus", "--series", "bogus", "--input", s(&ok)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(maxspec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(maxspec(&["--help"]).status.code(), Some(0));
}

#[test]
fn violation_dump_is_written_only_on_failure() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("dump.json");
    let o = maxspec(&["verify", "--trials", "5", "--dump", s(&dump)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!dump.exists());
}
