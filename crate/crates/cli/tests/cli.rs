use std::path::PathBuf;
use std::process::Command;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn mwgm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mwgm"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

#[test]
fn analyze_exact_verdict_exits_zero() {
    let out = mwgm(&["analyze", "--curve", "67a1.curve.json", "--field", "m29p7.field.json", "--p", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("M = 0"), "{text}");
    assert!(text.contains("Sha(E/K)[p] >= 1"), "{text}");
}

#[test]
fn analyze_candidates_exit_two_and_assume_resolves() {
    let args = [
        "analyze",
        "--curve", "14a3.curve.json",
        "--twist", "14a3-m35.curve.json",
        "--field", "dihedral35.field.json",
    ];
    let out = mwgm(&args);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("candidate decompositions"), "{text}");
    assert!(text.contains("missing data:"), "{text}");

    let mut resolved = args.to_vec();
    resolved.extend(["--assume", "lvalue=nonzero"]);
    let out = mwgm(&resolved);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("M = Zp~"), "{text}");
}

#[test]
fn analyze_json_is_versioned_and_stable() {
    let args = [
        "analyze", "--json",
        "--curve", "37a1.curve.json",
        "--field", "m211p5.field.json",
    ];
    let a = mwgm(&args);
    let b = mwgm(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["verdict"]["kind"], "exact");
    assert_eq!(doc["verdict"]["decomposition"]["display"], "Zp");
}

#[test]
fn dv_prints_the_place_table() {
    let out = mwgm(&["dv", "--curve", "37a1.curve.json", "--field", "m211p5.field.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("211"), "{text}");
    assert!(text.contains("Z/p^1"), "{text}");
}

#[test]
fn catalog_prints_all_dihedral_lattices() {
    let out = mwgm(&["catalog", "--p", "3", "--group", "dihedral"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["Zp~", "A~", "B~"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn selftest_passes_on_the_shipped_fixtures() {
    let out = mwgm(&["selftest", "--fixtures", "."]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = mwgm(&["analyze", "--curve", "nope.curve.json", "--field", "m29p7.field.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
