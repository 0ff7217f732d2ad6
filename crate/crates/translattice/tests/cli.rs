//! Black-box tests of the command line interface and its exit codes.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_translattice"))
}

fn data_file() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/double_plane_maximizing_sextic.toml")
}

#[test]
fn reduce_prints_the_reduced_class() {
    let out = bin().args(["reduce", "40", "-5", "2"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[2, 1, 28]");

    let out = bin().args(["reduce", "140", "-55", "22"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[8, 3, 8]");
}

#[test]
fn genus_lists_the_partition() {
    let out = bin().args(["genus", "--det", "55"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("genus 1: [2, 1, 28] [8, 3, 8]"));
    assert!(text.contains("genus 2: [4, 1, 14]"));
}

#[test]
fn discform_prints_the_cyclic_group() {
    let out = bin().args(["discform", "2", "1", "28"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Z/55"), "{text}");
    assert!(text.contains("q(g1)"), "{text}");
}

#[test]
fn singtype_classifies_germs() {
    let out = bin()
        .args(["singtype", "--poly", "x^2 + y^11", "--at", "0", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "A10");

    let out = bin()
        .args(["singtype", "--poly", "y^2 + z^10", "--at", "0", "0", "--chart", "y", "z"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "A9");
}

#[test]
fn compute_writes_report_and_svgs() {
    let dir = std::env::temp_dir().join("translattice_cli_test");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let out = bin()
        .arg("compute")
        .arg(data_file())
        .args(["--embedding", "plus"])
        .arg("--out")
        .arg(&report)
        .arg("--svg")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["embeddings"][0]["reduced_form"][0], "2");
    assert_eq!(json["embeddings"][0]["reduced_form"][1], "1");
    assert_eq!(json["embeddings"][0]["reduced_form"][2], "28");
    assert!(dir.join("paths_plus.svg").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn error_classes_map_to_exit_codes() {
    // Missing file: input error, exit 1.
    let out = bin().args(["compute", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Odd diagonal: rejected input, exit 1.
    let out = bin().args(["reduce", "1", "0", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Usage error from the argument parser itself: also an input error.
    let out = bin().args(["reduce", "1", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Help and version succeed.
    assert!(bin().arg("--help").output().unwrap().status.success());
    assert!(bin().arg("--version").output().unwrap().status.success());
}
