//! End-to-end checks of the binary: the documented command flows, exit
//! codes, and reproducible file output.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use zom::constructions::{audit_simple_properties, ConstructionParams, LabeledMatrix, Sidecar};
use zom::matrix::Matrix01;

fn zom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("zom-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn construct_then_check_reports_free() {
    let mtx = tmp("a24.mtx");
    let out = zom(&["construct", "a", "--b", "2", "--m", "4", "-o", mtx.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");

    let check = zom(&["check", "--pattern", "s0", "--matrix", mtx.to_str().unwrap()]);
    assert!(check.status.success());
    assert_eq!(stdout(&check).trim(), "free");
    fs::remove_file(&mtx).ok();
    fs::remove_file(tmp("a24.mtx.json")).ok();
}

#[test]
fn construct_output_is_reproducible_and_loadable() {
    let one = tmp("one.mtx");
    let two = tmp("two.mtx");
    for path in [&one, &two] {
        let out = zom(&[
            "construct",
            "at",
            "--b",
            "2",
            "--m",
            "3",
            "--t",
            "2",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let bytes_one = fs::read(&one).unwrap();
    let bytes_two = fs::read(&two).unwrap();
    assert_eq!(bytes_one, bytes_two, "construct must be byte reproducible");

    // Round trip: file + sidecar rebuild into a labeled matrix that
    // passes the audit, and re-serialization is byte identical.
    let sidecar_path = format!("{}.json", one.display());
    let matrix = Matrix01::parse_file(&fs::read_to_string(&one).unwrap()).unwrap();
    assert_eq!(matrix.to_file_string().as_bytes(), bytes_one.as_slice());
    let sidecar: Sidecar = serde_json::from_str(&fs::read_to_string(&sidecar_path).unwrap()).unwrap();
    let params: ConstructionParams = sidecar.params;
    let lm = LabeledMatrix::from_matrix(matrix, params).unwrap();
    assert!(audit_simple_properties(&lm).pass);

    for p in [one, two] {
        fs::remove_file(format!("{}.json", p.display())).ok();
        fs::remove_file(p).ok();
    }
}

#[test]
fn check_finds_witness_in_its_own_pattern() {
    let mtx = tmp("self.mtx");
    // p1 rendered as a matrix file.
    fs::write(&mtx, "2 3 4\n0 0\n0 1\n1 0\n1 2\n").unwrap();
    let out = zom(&[
        "check",
        "--pattern",
        "p1",
        "--matrix",
        mtx.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["outcome"], "witness");
    assert_eq!(v["cols"], serde_json::json!([0, 1, 2]));
    fs::remove_file(&mtx).ok();
}

#[test]
fn ex_single_cell_pattern_is_zero() {
    let pat = tmp("one.pat");
    fs::write(&pat, "1\n").unwrap();
    let out = zom(&[
        "ex",
        "--pattern",
        &format!("file:{}", pat.display()),
        "--n",
        "3",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["value"], 0);
    assert_eq!(v["exact"], true);
    fs::remove_file(&pat).ok();
}

#[test]
fn behrend_emits_verified_json() {
    let out = zom(&["behrend", "--n", "100", "--h", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["N"], 100);
}

#[test]
fn mark_reports_audit_result() {
    let mtx = tmp("mark.mtx");
    let out = zom(&["construct", "at", "--b", "2", "--m", "2", "--t", "2", "-o", mtx.to_str().unwrap()]);
    assert!(out.status.success());
    let out = zom(&["mark", "--matrix", mtx.to_str().unwrap(), "--t", "2"]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["auditResult"], "noneUnmarked");
    assert!(v["params"]["zeta"].as_u64().unwrap() >= 2);
    fs::remove_file(format!("{}.json", mtx.display())).ok();
    fs::remove_file(&mtx).ok();
}

#[test]
fn density_writes_csv_with_header() {
    let csv = tmp("density.csv");
    let out = zom(&[
        "density",
        "--variant",
        "a",
        "--b",
        "1..2",
        "--m",
        "2,4",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "b,m,t,rows,cols,weight,density,bound,status"
    );
    assert_eq!(lines.count(), 4);
    fs::remove_file(&csv).ok();
}

#[test]
fn usage_errors_exit_2() {
    let out = zom(&["check", "--pattern", "nosuch", "--matrix", "/nonexistent"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = zom(&["construct", "bogus", "--b", "1", "-o", "/tmp/never.mtx"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    // Missing input file.
    let out = zom(&["check", "--pattern", "s0", "--matrix", "/nonexistent-zom"]);
    assert_eq!(out.status.code(), Some(1));

    // Cell cap exceeded (tiny env override).
    let out = Command::new(env!("CARGO_BIN_EXE_zom"))
        .env("ZOM_CELL_CAP", "10")
        .args(["construct", "a", "--b", "2", "--m", "4", "-o", "/tmp/never2.mtx"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Budget exhaustion surfaces as unknown + exit 1.
    let mtx = tmp("budget.mtx");
    let build = zom(&["construct", "a", "--b", "2", "--m", "4", "-o", mtx.to_str().unwrap()]);
    assert!(build.status.success());
    let out = zom(&[
        "check",
        "--pattern",
        "s0",
        "--matrix",
        mtx.to_str().unwrap(),
        "--budget",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "unknown");
    fs::remove_file(format!("{}.json", mtx.display())).ok();
    fs::remove_file(&mtx).ok();
}

#[test]
fn classify_emits_expected_fields() {
    let out = zom(&["classify", "--pattern", "s0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["acyclic"], true);
    assert_eq!(v["light"], false);
    assert_eq!(v["degeneracy"], 2);
    assert_eq!(v["covering"]["kStar"], 1);
    assert_eq!(v["reduction"]["outcome"], "stuck");
    assert_eq!(v["qFreeLight"], false);
}
