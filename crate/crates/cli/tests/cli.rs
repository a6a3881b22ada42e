use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use spcsep_cli::matrix_file::MatrixFile;
use tempfile::TempDir;

fn spcsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spcsep")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    let out = spcsep(&full);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: stdout {:?}, stderr {:?}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (doc, out.status.code().unwrap())
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    assert_eq!(spcsep(&full).status.code(), Some(0));
    path
}

fn real_file(k: usize, m: usize, rows: Vec<Vec<f64>>) -> String {
    let n = k * m;
    MatrixFile { k, m, re: rows, im: vec![vec![0.0; n]; n] }.write()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn counterexample_is_spc_but_not_ppt() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "c.json", &["counterexample"]);
    let (doc, code) = json(&["analyze", s(&path)]);
    assert_eq!(code, 0);
    let c = &doc["classification"];
    assert_eq!(c["spc"], true);
    assert_eq!(c["ppt"], false);
    assert_eq!(c["psd"], true);
    assert_eq!(c["tensor_rank"], 3);
    assert_eq!(c["separability"]["verdict"], "ENTANGLED");
}

#[test]
fn counterexample_reproduction_passes() {
    let (doc, code) = json(&["reproduce", "counterexample"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "PASS");
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["outcome"] == "PASS"));
}

#[test]
fn identity_is_separable_by_rank() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "id.json", &["identity", "--k", "2", "--m", "2"]);
    let (doc, code) = json(&["analyze", s(&path)]);
    assert_eq!(code, 0);
    let sep = &doc["classification"]["separability"];
    assert_eq!(sep["verdict"], "SEPARABLE");
    assert_eq!(sep["certificates"][0], "RANK≤2");
}

#[test]
fn malformed_file_names_the_field() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "bad.json",
        r#"{"k": 2, "m": 2, "re": [[1, 0, 0, 0], [0, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "im": []}"#,
    );
    let out = spcsep(&["analyze", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("re[1]"), "{}", stderr(&out));

    let path = write(&dir, "nom.json", r#"{"k": 1, "re": [[1]], "im": [[0]]}"#);
    let out = spcsep(&["analyze", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`m`"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_a_parse_error() {
    let out = spcsep(&["analyze", "/nonexistent/spcsep.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rank_three_spc_has_no_canonical_form() {
    // 2·Id⊗Id + Z⊗Z + X⊗X: SPC with eigenvalues 4, 2, 2, 0
    let rows =
        vec![vec![3.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0, 0.0], vec![1.0, 0.0, 0.0, 3.0]];
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "r3.json", &real_file(2, 2, rows));
    let (doc, _) = json(&["analyze", s(&path)]);
    assert_eq!(doc["classification"]["spc"], true);
    let out = spcsep(&["canonical", s(&path)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("rank"), "{}", stderr(&out));
}

#[test]
fn random_spc_canonicalizes() {
    let dir = TempDir::new().unwrap();
    for seed in ["1", "2", "3"] {
        let path = generate(&dir, "spc.json", &["random-spc", "--k", "2", "--terms", "4", "--seed", seed]);
        let (doc, code) = json(&["canonical", s(&path)]);
        assert_eq!(code, 0, "{doc}");
        let checks = doc["checks"].as_array().unwrap();
        let round_trip = checks.iter().find(|c| c["name"] == "round-trip").expect("round-trip check");
        assert_eq!(round_trip["outcome"], "PASS");
    }
}

#[test]
fn non_hermitian_input_is_a_precondition_error() {
    let rows =
        vec![vec![1.0, 2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]];
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "nh.json", &real_file(2, 2, rows));
    assert_eq!(spcsep(&["canonical", s(&path)]).status.code(), Some(3));
}

#[test]
fn wrong_shape_for_canonical_mode() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "id23.json", &["identity", "--k", "2", "--m", "3"]);
    assert_eq!(spcsep(&["canonical", s(&path)]).status.code(), Some(3));
}

#[test]
fn reduction_in_two_by_three() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "r3.json", &["rank3", "--m", "3", "--seed", "4"]);
    let (doc, code) = json(&["canonical", s(&path), "--mode", "reduce", "--epsilon", "1e-2", "--epsilon", "1e-4"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["status"], "PASS");
}

#[test]
fn same_seed_gives_identical_reports() {
    let args = ["--output", "json", "reproduce", "spc-ppt-sweep", "--samples", "200", "--seed", "17"];
    let a = spcsep(&args);
    let b = spcsep(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = spcsep(&["--output", "json", "reproduce", "spc-ppt-sweep", "--samples", "200", "--seed", "18"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generated_files_are_deterministic() {
    let a = spcsep(&["generate", "random-spc", "--k", "3", "--seed", "9"]);
    let b = spcsep(&["generate", "random-spc", "--k", "3", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let file = MatrixFile::parse(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!((file.k, file.m), (3, 3));
}

#[test]
fn unknown_target_is_rejected() {
    assert_eq!(spcsep(&["reproduce", "no-such-target"]).status.code(), Some(2));
}

#[test]
fn bad_tolerance_is_rejected() {
    assert_eq!(spcsep(&["--tol", "2", "reproduce", "counterexample"]).status.code(), Some(2));
}

#[test]
fn text_output_leads_with_checks() {
    let out = spcsep(&["reproduce", "counterexample"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("[PASS] "), "{text}");
    assert!(text.contains("status: PASS"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_files_round_trip(
        (k, m, re, im) in (1usize..4, 1usize..4).prop_flat_map(|(k, m)| {
            let n = k * m;
            let rows = proptest::collection::vec(proptest::collection::vec(-1e6f64..1e6, n), n);
            (Just(k), Just(m), rows.clone(), rows)
        })
    ) {
        let text = MatrixFile { k, m, re, im }.write();
        let back = MatrixFile::parse(&text).unwrap();
        prop_assert_eq!(back.write(), text);
    }
}
