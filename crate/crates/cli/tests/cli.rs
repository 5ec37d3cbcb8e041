use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn berezin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berezin")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (Output, String) {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--out", p]);
    let out = berezin(&all);
    let csv = fs::read_to_string(&path).unwrap_or_default();
    (out, csv)
}

fn field(line: &str, k: usize) -> f64 {
    line.rsplit(',').nth(5 - k).unwrap().parse().unwrap()
}

#[test]
fn peetre_row_at_zero_has_reference_two_thirds() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = run_to(dir.path(), "peetre.csv", &["verify-peetre", "--n", "2", "--nu", "2", "--lambda-grid", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "inputs,computed,reference,abs_err,rel_err,status");
    assert_eq!(lines.len(), 4);
    let row = lines.iter().find(|l| l.starts_with("n=2;nu=2;lambda=0,")).unwrap();
    // columns: inputs, computed, reference, abs_err, rel_err, status
    assert!((field(row, 2) - 2.0 / 3.0).abs() < 1e-14, "{row}");
    assert!(row.ends_with(",pass"));
}

#[test]
fn inadmissible_level_is_a_usage_error() {
    let out = berezin(&["verify-multiplier", "--n", "1", "--nu", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("m < nu - n/2"), "{msg}");
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_flags_are_usage_errors() {
    for args in [
        &["verify-peetre", "--tol", "0"][..],
        &["verify-peetre", "--lambda-grid", "x"],
        &["apply", "--n", "2", "--z", "0.3,0"],
        &["verify-eigen", "--n", "2", "--nu", "3"],
        &["no-such-command"],
    ] {
        assert_eq!(berezin(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn multiplier_table_schema() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["tabulate-multiplier", "--n", "2", "--nu", "3", "--m", "1", "--lambda-grid", "0,0.5,1,2"];
    let (out, csv) = run_to(dir.path(), "table.csv", &args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "lambda,f_numeric,f_closed,abs_err,rel_err,status");
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 6);
        // 17 significant digits in scientific notation
        let mantissa = cols[1].split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "{line}");
        assert_eq!(cols[5], "pass");
    }
}

#[test]
fn failing_rows_set_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["tabulate-multiplier", "--n", "2", "--nu", "3", "--m", "1", "--lambda-grid", "0", "--tol", "1e-20"];
    let (out, csv) = run_to(dir.path(), "strict.csv", &args);
    assert_eq!(out.status.code(), Some(1));
    assert!(csv.lines().nth(1).unwrap().ends_with(",fail"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["tabulate-multiplier", "--n", "1", "--nu", "2", "--m", "1"][..],
        &["verify-geometry", "--n", "2", "--draws", "5", "--seed", "11"],
        &["apply", "--n", "2", "--nu", "3", "--rule", "monte-carlo", "--draws", "2000", "--z", "0.2,0;0,0.1"],
    ] {
        let (a, first) = run_to(dir.path(), "a.csv", args);
        let (b, second) = run_to(dir.path(), "b.csv", args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(b.status.code(), Some(0));
        assert!(!first.is_empty());
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn identity_suite_rows() {
    let out = berezin(&["verify-identities", "--draws", "3", "--seed", "5", "--tol", "1e-8"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 3);
}
