use std::process::{Command, Output};

use idemnorm::report::NormReport;
use idemnorm::schur::Gamma2Bounds;
use idemnorm::sweep::{sweep, SweepReport};
use idemnorm::verify::VerifySummary;
use idemnorm::{Group, Subset};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idemnorm"))
        .args(args)
        .env_remove("IDEMNORM_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn norm_two_cosets() {
    let o = run(&["norm", "-g", "Z4", "-s", "0,1"]);
    assert_eq!(code(&o), 0);
    let r: NormReport = serde_json::from_str(&stdout(&o)).unwrap();
    let g = Group::parse("Z4").unwrap();
    let expected = NormReport::compute(&g, &Subset::parse(&g, "0,1").unwrap(), false, 1e-3).unwrap();
    assert_eq!(r, expected);
    assert_eq!(r.analysis.relative_order, Some(4));

    let o = run(&["norm", "-g", "Z4", "-s", "0,1", "--format", "text"]);
    let text = stdout(&o);
    assert!(text.contains("norm       1.2071067812"), "{text}");
    assert!(text.contains("two_cosets (q = 4)"));
}

#[test]
fn norm_nonabelian_coset() {
    let o = run(&["norm", "-g", "S3", "-s", "0"]);
    assert_eq!(code(&o), 0);
    let r: NormReport = serde_json::from_str(&stdout(&o)).unwrap();
    let b = r.cb_norm.unwrap();
    assert!((b.lower - 1.0).abs() < 1e-6 && (b.upper - 1.0).abs() < 1e-6);
    assert_eq!(r.analysis.kind.as_str(), "coset");
}

#[test]
fn norm_other_and_tuples() {
    let o = run(&["norm", "-g", "Z6", "-s", "0,1,3"]);
    let r: NormReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.analysis.kind.as_str(), "other");
    assert!(r.bs_norm.unwrap() >= 4.0 / 3.0);

    let o = run(&["norm", "-g", "Z2xZ4", "-s", "(0,0),(1,1)"]);
    assert_eq!(code(&o), 0);
    let r: NormReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.subset.to_vec(), vec![0, 5]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["norm", "-g", "Z4", "-s", "0,9"])), 2);
    assert_eq!(code(&run(&["norm", "-g", "Q9", "-s", "0"])), 2);
    assert_eq!(code(&run(&["norm", "-g", "Z4", "-s", "0", "--format", "csv"])), 2);
    assert_eq!(code(&run(&["schur", "[[1, 2], [3]]"])), 2);
    assert_eq!(code(&run(&["bogus"])), 2);
    let o = run(&["sweep", "-g", "Z64"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds"));
}

#[test]
fn order_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_idemnorm"))
        .args(["norm", "-g", "Z6", "-s", "0"])
        .env("IDEMNORM_MAX_ORDER", "4")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn sweep_reports_match_library() {
    let o = run(&["sweep", "-g", "Z6"]);
    assert_eq!(code(&o), 0);
    let r: SweepReport = serde_json::from_str(&stdout(&o)).unwrap();
    let mut expected = sweep(&Group::parse("Z6").unwrap(), 1e-9).unwrap();
    expected.wall_time_secs = None;
    assert_eq!(r, expected);

    let o = run(&["sweep", "-g", "S3", "--cb"]);
    assert_eq!(code(&o), 0);
    let r: SweepReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.violations.is_empty());

    let o = run(&["sweep", "-g", "Z6", "--timing"]);
    let r: SweepReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.wall_time_secs.is_some());
}

#[test]
fn sweep_violations_exit_1() {
    assert_eq!(code(&run(&["sweep", "-g", "Z6", "--tol", "0"])), 1);
}

#[test]
fn sweep_output_is_independent_of_workers() {
    let one = run(&["--workers", "1", "sweep", "-g", "Z10"]);
    let four = run(&["--workers", "4", "sweep", "-g", "Z10"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let one = run(&["--workers", "1", "sweep", "-g", "D4", "--format", "csv"]);
    let four = run(&["--workers", "4", "sweep", "-g", "D4", "--format", "csv"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sweep_csv() {
    let o = run(&["sweep", "-g", "Z5", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("subset,orbit_size,kind,q,norm"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn schur_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = run(&["schur", "--f0", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let b: Gamma2Bounds = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(b.contains(9.0 / 7.0, 1e-3));
    assert!(cert.exists());

    let o = run(&["schur", "[[1]]"]);
    let b: Gamma2Bounds = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((b.lower - 1.0).abs() < 1e-9 && (b.upper - 1.0).abs() < 1e-9);

    let o = run(&["schur", "--f0", "--witness-only"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let w = v["witness_lower_bound"].as_f64().unwrap();
    assert!((w - 26f64.sqrt() / 4.0).abs() < 1e-12);

    let path = dir.path().join("m.json");
    std::fs::write(&path, "[[1, 1], [1, [0, -1]]]").unwrap();
    assert_eq!(code(&run(&["schur", path.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["schur", "--witness-only"])), 2);
}

#[test]
fn verify_commands() {
    let o = run(&["verify", "--groups", "Z3"]);
    assert_eq!(code(&o), 0);
    let s: VerifySummary = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(s.all_passed());
    assert!(s.items.iter().any(|i| i.name == "sweep Z3"));

    let o = run(&["verify", "--groups", "Z6", "--tol", "0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("failed: sweep Z6"));
}

#[test]
fn out_file_and_cayley_groups() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("z3.json");
    std::fs::write(&table, r#"{"n": 3, "identity": 0, "table": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "norm",
        "-g",
        table.to_str().unwrap(),
        "-s",
        "0,1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let r: NormReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let b = r.cb_norm.unwrap();
    assert!((b.lower - 4.0 / 3.0).abs() < 5e-3);
    assert_eq!(r.analysis.relative_order, Some(3));
}
