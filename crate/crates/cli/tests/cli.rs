use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use knotcurve::export::CurveDocument;
use knotcurve::verify::VerificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotcurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn trefoil_build_verify_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("trefoil.json");
    let obj = dir.path().join("trefoil.obj");
    let tube = dir.path().join("tube.obj");
    let out = run(&[
        "build",
        "--braid",
        "1 1 1",
        "--out",
        path_str(&json),
        "--obj",
        path_str(&obj),
        "--tube",
        path_str(&tube),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(&json).unwrap();
    let doc = CurveDocument::from_json(&text).unwrap();
    assert_eq!(doc.components.len(), 1);
    assert!(doc.components[0].closed);
    assert_eq!(doc.metadata.braid.as_deref(), Some("n=2; 1 1 1"));
    let embedded = doc.verification.clone().expect("report embedded");
    assert!(embedded.passed);
    assert!((embedded.components[0].curvature.fd_min - 1.0).abs() <= 1e-5);
    assert!((embedded.components[0].curvature.fd_max - 1.0).abs() <= 1e-5);

    let out = run(&["verify", "--in", path_str(&json), "--json"]);
    assert_eq!(code(&out), 0);
    let report: VerificationReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.passed, embedded.passed);
    let (a, b) = (&report.components[0], &embedded.components[0]);
    assert!((a.c2.max_position - b.c2.max_position).abs() <= 1e-12);
    assert!((a.curvature.fd_min - b.curvature.fd_min).abs() <= 1e-12);
    assert!((a.curvature.fd_max - b.curvature.fd_max).abs() <= 1e-12);
    assert!((report.distance.bound - embedded.distance.bound).abs() <= 1e-12);

    let obj = fs::read_to_string(&obj).unwrap();
    let v = obj.lines().filter(|l| l.starts_with("v ")).count();
    let l = obj.lines().filter(|l| l.starts_with("l ")).count();
    assert!(v > 1000);
    assert_eq!(v, l, "closed polyline has one edge per vertex");
    let tube = fs::read_to_string(&tube).unwrap();
    assert!(tube.lines().any(|l| l.starts_with("f ")));
}

#[test]
fn build_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["build", "--braid", "n=2; 1 -1", "--out", path_str(p), "--no-verify"]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let doc = CurveDocument::from_json(&fs::read_to_string(&a).unwrap()).unwrap();
    assert!(doc.verification.is_none());
    assert_eq!(doc.components.len(), 2);
}

#[test]
fn three_strand_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "build",
        "--braid",
        "n=3; 1 -2",
        "--out",
        path_str(&json),
        "--csv",
        path_str(&csv),
        "--samples-per-unit",
        "5",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,x,y,z,kappa_fd"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.iter().all(|r| r.len() == 5));
    // One component: s starts at zero exactly once.
    assert_eq!(rows.iter().filter(|r| r[0] == 0.0).count(), 1);
    assert!(rows.iter().all(|r| (r[4] - 1.0).abs() < 1e-5));
    let doc = CurveDocument::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc.components.len(), 1);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("x.json");
    for braid in ["0", "1 x", "n=2; 5", ""] {
        let out = run(&["build", "--braid", braid, "--out", path_str(&json)]);
        assert_eq!(code(&out), 2, "{braid:?}");
    }
    assert!(!json.exists());

    fs::write(&json, "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", "--in", path_str(&json)])), 2);
    assert_eq!(code(&run(&["sticks", "--name", "q+"])), 2);
    assert_eq!(code(&run(&["lattice", "--word", "I+ J+", "--closed"])), 2);
}

#[test]
fn io_errors_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["verify", "--in", path_str(&missing)])), 5);
    let bad_out = dir.path().join("no/such/dir/out.json");
    let out = run(&["build", "--braid", "1", "--out", path_str(&bad_out), "--no-verify"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn tampered_document_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("unknot.json");
    assert_eq!(code(&run(&["build", "--braid", "1", "--out", path_str(&json), "--no-verify"])), 0);
    let mut doc = CurveDocument::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    doc.components[0].segments[7].translation[0] += 1e-3;
    fs::write(&json, doc.to_json()).unwrap();
    let out = run(&["verify", "--in", path_str(&json)]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).contains("verification: FAIL"));
}

#[test]
fn sticks_subcommand() {
    let out = run(&["sticks", "--name", "k-", "--validate"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("displacement (0π, 0π, -4π)"), "{text}");
    assert!(text.trim_end().ends_with("pass"));

    let out = run(&["sticks"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 6);
}

#[test]
fn lattice_subcommand() {
    let out = run(&["lattice", "--word", "K- J+"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("unallowable pair K-J+ at 0"));

    let out = run(&["lattice", "--word", "I+ J+ I- J-", "--closed"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("gate: pass"));

    let out = run(&["lattice", "--word", "I+ J+ I- J-"]);
    assert_eq!(code(&out), 3, "open word returns to its start");
}
