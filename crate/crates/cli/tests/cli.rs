//! End-to-end runs of the `ratrep` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ratrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratrep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn presentation(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presentations").join(name).display().to_string()
}

#[test]
fn list_counts_entries() {
    let o3 = ratrep(&["list", "--p", "3"]);
    assert!(o3.status.success());
    let rows3 = stdout(&o3).lines().count() - 1;
    assert_eq!(rows3, 33);
    let o5 = ratrep(&["list", "--p", "5"]);
    let s5 = stdout(&o5);
    assert_eq!(s5.lines().count() - 1, 39);
    assert!(s5.contains("Phi_3(311)b_1"));
    assert!(!stdout(&o3).contains("Phi_3(311)b_1"));
}

#[test]
fn unsupported_prime_is_rejected() {
    let o = ratrep(&["list", "--p", "4"]);
    assert!(!o.status.success());
    let o = ratrep(&["pairs", "--group", "Phi_1(5)", "--p", "11"]);
    assert!(!o.status.success());
}

#[test]
fn unknown_group_is_an_error() {
    let o = ratrep(&["pairs", "--group", "Phi_99(1)", "--p", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reps_export_faithful_phi8() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ratrep(&["reps", "--group", "Phi_8(32)", "--p", "3", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    let rows: Vec<Vec<&str>> = manifest.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    let top = rows.iter().find(|r| r[2] == "18").expect("degree-18 representation");
    let text = fs::read_to_string(dir.path().join(top[5])).unwrap();
    let mats = ratrep_core::rep::parse_export(&text).unwrap();
    assert_eq!(mats.len(), 5);
    assert!(mats.iter().all(|m| m.dim() == 18));
    let total: u64 = rows.iter().map(|r| r[3].parse::<u64>().unwrap().pow(2) * {
        let d: u64 = r[4].parse().unwrap();
        if d == 1 { 1 } else { d - d / 3 }
    }).sum();
    assert_eq!(total, 243);
}

#[test]
fn verify_all_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = ratrep(&["verify", "--all", "--p", "3", "--report", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("33 groups, 0 failed"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["groups"].as_array().unwrap().len(), 33);
}

#[test]
fn output_is_deterministic() {
    let args = ["wedderburn", "--group", "all", "--p", "3"];
    let a = ratrep(&args);
    let b = ratrep(&["--workers", "1", "wedderburn", "--group", "all", "--p", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = ratrep(&["pairs", "--group", "Phi_7(1^5)", "--p", "3"]);
    let b = ratrep(&["pairs", "--group", "Phi_7(1^5)", "--p", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn wedderburn_methods_agree() {
    let o = ratrep(&["wedderburn", "--group", "Phi_8(32)", "--p", "3"]);
    let s = stdout(&o);
    assert!(s.contains("formula = oracle"), "{s}");
    assert!(s.contains("M_9(Q(zeta_3))"));
}

#[test]
fn ingest_round_trip() {
    let o = ratrep(&["ingest", &presentation("phi10_p3.txt")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("# order 243"));
    let dir = tempfile::tempdir().unwrap();
    let echoed = dir.path().join("echo.txt");
    fs::write(&echoed, &s).unwrap();
    let again = ratrep(&["ingest", echoed.to_str().unwrap()]);
    assert_eq!(again.stdout, o.stdout);
    let w = ratrep(&["wedderburn", "--file", echoed.to_str().unwrap()]);
    assert!(w.status.success(), "{}", String::from_utf8_lossy(&w.stderr));
}

#[test]
fn ingest_rejects_inconsistent_text() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "name bad\np 3\ngens 2\npower 1 = g2^2\npower 2 = g1\n").unwrap();
    let o = ratrep(&["ingest", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
