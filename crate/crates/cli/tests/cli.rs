use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn u3rb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_u3rb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn operator(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data/operators")
        .join(format!("{name}.json"));
    p.to_str().unwrap().to_string()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    p.to_str().unwrap().to_string()
}

#[test]
fn check_reports_rb_and_faults() {
    let o = u3rb(&["check", &operator("r5")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("RB weight 0: YES"));

    let o = u3rb(&["check", &operator("r13")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("RB weight 0: NO"));
    assert!(stdout(&o).contains("pair (e11, e11): -e12"));
}

#[test]
fn check_with_other_weight() {
    // R5 is nilpotent, so it fails the identity at weight 1
    let o = u3rb(&["check", &operator("r5"), "--weight", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("RB weight 1: NO"));
}

#[test]
fn verify_catalog_family_selection() {
    let dir = tempfile::tempdir().unwrap();
    let json = tmp(&dir, "report.json");
    let o = u3rb(&[
        "verify-catalog",
        "--family",
        "R40",
        "--samples",
        "5",
        "--json",
        &json,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("image dimension 3"), "{out}");
    assert!(out.lines().any(|l| l == "1/1 OK, rb-index 3"), "{out}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["entries"][0]["id"], "R40");

    let o = u3rb(&["verify-catalog", "--family", "R99"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_catalog_full_run() {
    let o = u3rb(&["verify-catalog", "--samples", "3", "--jobs", "2"]);
    let out = stdout(&o);
    // R13 as printed fails the identity
    assert_eq!(o.status.code(), Some(1));
    assert!(out.lines().any(|l| l == "39/40 OK, rb-index 3"), "{out}");
}

#[test]
fn canonicalize_forms() {
    let o = u3rb(&["canonicalize", "e23"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("form e12"));
    assert!(stdout(&o).contains("witness theta13"));

    let o = u3rb(&["canonicalize", "e11 + 2*e12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("form e11"));

    let o = u3rb(&["canonicalize", "e12 +* e13"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at byte"), "{}", stderr(&o));
}

#[test]
fn system_feeds_gb_and_json_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let sys = tmp(&dir, "sys.json");
    let (a, b) = (tmp(&dir, "a.json"), tmp(&dir, "b.json"));
    assert_eq!(
        u3rb(&["system", "--preset", "sec4.1", "-o", &sys])
            .status
            .code(),
        Some(0)
    );
    let o = u3rb(&["gb", &sys, "--json", &a]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(u3rb(&["gb", &sys, "--json", &b]).status.code(), Some(0));
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 124);
    assert_eq!(v["reduced"], true);

    // a basis report is itself a system file
    let o = u3rb(&["gb", &a]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn gb_resource_limit_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let sys = tmp(&dir, "sys.json");
    u3rb(&["system", "--preset", "sec6", "-o", &sys]);
    let o = u3rb(&["gb", &sys, "--max-pairs", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn member_decisions() {
    let dir = tempfile::tempdir().unwrap();
    let sys = tmp(&dir, "sys.json");
    std::fs::write(
        &sys,
        r#"{"vars": ["x", "y"], "order": "lex", "gens": ["x^2 - 1", "x*y - 1"]}"#,
    )
    .unwrap();
    let o = u3rb(&["member", &sys, "x - y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("YES"));
    assert_eq!(u3rb(&["member", &sys, "x"]).status.code(), Some(1));
    assert_eq!(u3rb(&["member", &sys, "x + q"]).status.code(), Some(2));
}

#[test]
fn conjugate_then_recover_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (psi, conj) = (tmp(&dir, "psi.json"), tmp(&dir, "conj.json"));
    let witness = tmp(&dir, "w.json");
    let o = u3rb(&[
        "conjugate",
        &operator("r8"),
        "--alpha",
        "2",
        "--beta",
        "3",
        "--delta",
        "1/2",
        "-o",
        &psi,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = u3rb(&["conjugate", &psi, "--theta", "--scale", "-3", "-o", &conj]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(u3rb(&["check", &conj]).status.code(), Some(0));

    let o = u3rb(&[
        "find-conj",
        &operator("r8"),
        &conj,
        "--allow-theta",
        "--json",
        &witness,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert!(v["maps"].is_array());

    // R8 and R5 lie in different orbits
    let o = u3rb(&[
        "find-conj",
        &operator("r8"),
        &operator("r5"),
        "--allow-theta",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rb_index_of_file_and_catalog() {
    let o = u3rb(&["rb-index", &operator("r40")]);
    assert!(stdout(&o).contains("nilpotency degree 3"));
    let o = u3rb(&["rb-index"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rb-index 3"), "{}", stdout(&o));
}

#[test]
fn case_preset_passes() {
    let o = u3rb(&["case", "--preset", "sec4.1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("c*a"));
    assert!(!out.contains("FAIL"));

    let o = u3rb(&["case", "--preset", "sec9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_is_usage_error() {
    let o = u3rb(&["check", "/nonexistent/op.json"]);
    assert_eq!(o.status.code(), Some(2));
}
