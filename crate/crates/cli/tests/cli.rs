use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn smlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smlab")).args(args).current_dir(root()).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verdicts_do_not_set_the_exit_code_without_assert() {
    let o = smlab(&["check", "fixtures/example8.prof", "--condition", "m-maxrou"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"verdict\": false"));
    assert_eq!(code(&smlab(&["check", "fixtures/example8.prof", "--condition", "m-maxrou", "--assert"])), 1);
    assert_eq!(code(&smlab(&["check", "fixtures/example8.prof", "--condition", "m-maxprop", "--assert"])), 0);
    assert_eq!(code(&smlab(&["check", "fixtures/example12.prof", "--assert"])), 1);
}

#[test]
fn check_all_lists_seven_reports() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&smlab(&["check", "fixtures/spc-not-maxprop.prof"]))).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["condition"].as_str().unwrap()).collect();
    assert_eq!(ids, ["usm", "spc", "ncc", "m-maxprop", "w-maxprop", "m-maxrou", "w-maxrou"]);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.prof");
    std::fs::write(&bad, "2\n1 2\n2 1\n1 2\n").unwrap();
    let o = smlab(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));
    assert_eq!(code(&smlab(&["check", "fixtures/example8.prof", "--condition", "nope"])), 2);
    assert_eq!(code(&smlab(&["da", "fixtures/example8.prof"])), 2);
    assert_eq!(code(&smlab(&["census", "--n", "2"])), 2);
    assert_eq!(code(&smlab(&["gen", "--family", "fixture", "--name", "nope"])), 2);
    assert_eq!(code(&smlab(&["frobnicate"])), 2);
}

#[test]
fn oversized_instances_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.prof");
    std::fs::write(&big, stdout(&smlab(&["gen", "--family", "extremal", "--n", "9"]))).unwrap();
    assert_eq!(code(&smlab(&["stable", big.to_str().unwrap()])), 3);
    assert_eq!(code(&smlab(&["check", big.to_str().unwrap(), "--condition", "ncc"])), 3);
    assert_eq!(code(&smlab(&["census", "--n", "4", "--exhaustive"])), 3);
    assert_eq!(code(&smlab(&["census", "--n", "9", "--sample", "5", "--seed", "1"])), 3);
    // `all` skips NCC instead of failing.
    assert_eq!(code(&smlab(&["check", big.to_str().unwrap()])), 0);
}

#[test]
fn brute_force_ceiling_is_configurable() {
    let o = Command::new(env!("CARGO_BIN_EXE_smlab"))
        .args(["stable", "fixtures/example8.prof"])
        .env("SMLAB_BRUTE_CEILING", "3")
        .current_dir(root())
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(code(&smlab(&["stable", "fixtures/example8.prof", "--max-n", "3"])), 3);
    let o = smlab(&["stable", "fixtures/crossed-tops-1.prof"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"count\": 2"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["classify", "fixtures/example12.prof"],
        vec!["da", "fixtures/example8.prof", "--proposing", "women", "--trace", "--json"],
        vec!["census", "--n", "4", "--sample", "300", "--seed", "5"],
    ] {
        assert_eq!(smlab(&args).stdout, smlab(&args).stdout, "{args:?}");
    }
}

#[test]
fn n2_census_matches_pinned_file() {
    let pinned = std::fs::read(root().join("crates/cli/tests/data/census-n2-exhaustive.json")).unwrap();
    assert_eq!(smlab(&["census", "--n", "2", "--exhaustive"]).stdout, pinned);
}

#[test]
fn csv_matches_pinned_file() {
    let pinned = std::fs::read(root().join("crates/cli/tests/data/census-n3-exhaustive.csv")).unwrap();
    assert_eq!(smlab(&["census", "--n", "3", "--exhaustive", "--format", "csv"]).stdout, pinned);
}

#[test]
fn interrupted_census_resumes_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let out = dir.path().join("table.json");
    let cp_s = cp.to_str().unwrap();
    let o = smlab(&["census", "--n", "3", "--exhaustive", "--stop-after", "20000", "--checkpoint", cp_s]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let o = smlab(&["census", "--resume", cp_s, "--stop-after", "1", "--checkpoint", cp_s]);
    assert_eq!(code(&o), 0);
    let o = smlab(&["census", "--resume", cp_s, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let pinned = std::fs::read(root().join("crates/cli/tests/data/census-n3-exhaustive.json")).unwrap();
    assert_eq!(std::fs::read(&out).unwrap(), pinned);
}

#[test]
fn gen_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    for args in [vec!["gen", "--family", "extremal", "--n", "5"], vec!["gen", "--family", "fixture", "--name", "tightness-3"]] {
        let f = dir.path().join("p.prof");
        std::fs::write(&f, smlab(&args).stdout).unwrap();
        assert_eq!(code(&smlab(&["classify", f.to_str().unwrap()])), 0);
    }
}

#[test]
fn checked_in_fixtures_match_the_generators() {
    for (file, id) in [
        ("example5", "example-5"),
        ("example8", "example-8"),
        ("example12", "example-12"),
        ("tightness1", "tightness-1"),
        ("tightness2", "tightness-2"),
        ("tightness3", "tightness-3"),
        ("spc-not-maxprop", "spc-not-maxprop"),
        ("crossed-tops-1", "thm22-profile-1"),
        ("crossed-tops-2", "thm22-profile-2"),
    ] {
        let text = std::fs::read_to_string(root().join(format!("fixtures/{file}.prof"))).unwrap();
        let parsed = smlab_core::format::parse_profile(&text).unwrap();
        assert_eq!(parsed, smlab_core::fixtures::gen_fixture(id).unwrap(), "{file}");
    }
}

#[test]
fn verify_reports_every_check() {
    let o = smlab(&["verify", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("holds      n2-spc-eq-usm"));
    assert!(!text.contains("VIOLATED"));
}
