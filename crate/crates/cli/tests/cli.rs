//! End-to-end tests of the `sva` binary: golden reports, exit codes and the
//! bundled algebra specs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sva_core::Field;

fn sva(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sva")).args(args).output().expect("binary runs")
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn algebra(name: &str) -> String {
    root().join("algebras").join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn hopf_n2_matches_golden_and_oracle() {
    let out = sva(&["--json", "hopf", "--check", "n2", "--k", "2", "--ns"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report, golden("hopf_n2.json"));
    // Independently: c = 6 + 6⟨e, e⟩ with ⟨e, e⟩ = 1/(4ℓ) for the Hopf lift.
    let f = Field::with_params(&["l"]);
    let c = f.parse(report["data"]["c"].as_str().unwrap()).unwrap();
    assert_eq!(c, f.parse("6 + 6/(4*l)").unwrap());
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn hopf_mirror_matches_golden_and_residuals_vanish() {
    let out = sva(&["--json", "hopf", "--check", "mirror"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report, golden("hopf_mirror.json"));
    assert_eq!(report["data"]["j_residual"], "0");
    assert_eq!(report["data"]["h_residual"], "0");
}

#[test]
fn off_shell_hopf_structure_fails_verification() {
    let out = sva(&["hopf", "--check", "killing", "--a", "a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL]"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(sva(&["validate", "/nonexistent/spec.json"]).status.code(), Some(2));
    let bad_expr = sva(&["eval", &algebra("g_ell.json"), "v_1 + w"]);
    assert_eq!(bad_expr.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_expr.stderr).contains("byte 6"));
    assert_eq!(sva(&["hopf", "--check", "bogus"]).status.code(), Some(2));
}

#[test]
fn bundled_algebras_validate() {
    for entry in std::fs::read_dir(root().join("algebras")).unwrap() {
        let path = entry.unwrap().path();
        let out = sva(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn bundled_specs_match_presets() {
    for (preset, file) in
        [("g-ell", "g_ell.json"), ("hopf", "hopf.json"), ("manin-su2", "manin_su2.json"), ("abelian-double", "abelian_double.json")]
    {
        let out = sva(&["preset", preset]);
        assert_eq!(out.status.code(), Some(0));
        let bundled: Value = serde_json::from_str(&std::fs::read_to_string(algebra(file)).unwrap()).unwrap();
        assert_eq!(json(&out), bundled, "{preset}");
    }
}

#[test]
fn manin_double_central_charge() {
    let out = sva(&["--json", "n2", &algebra("manin_su2.json"), "--level", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["c"], "12");
}

#[test]
fn eval_brackets_in_json() {
    let out = sva(&["--json", "eval", &algebra("g_ell.json"), "[v_2, :v_3 v^1:]"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
