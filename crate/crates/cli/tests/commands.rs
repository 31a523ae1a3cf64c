use std::path::PathBuf;
use std::process::{Command, Output};

use quadric_hilbert::format::{parse_ascii, parse_json};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn quadric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadric"))
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str], file: &str) -> (i32, String, String) {
    let path = fixture(file);
    let mut all: Vec<&str> = args.to_vec();
    all.insert(1, path.to_str().unwrap());
    let out = quadric(&all);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn single_point_hilbert() {
    assert_eq!(
        run(&["hilbert"], "single_point.cfg"),
        (0, "1\n".into(), String::new())
    );
}

#[test]
fn hilbert_values_of_three_points() {
    let (code, out, _) = run(&["hilbert"], "antidiagonal.cfg");
    assert_eq!(code, 0);
    assert_eq!(out, "1 2 3\n2 3 3\n3 3 3\n");
}

#[test]
fn replay_prints_five_matrices_and_is_seed_stable() {
    let (code, first, _) = run(&["replay", "--oracle"], "staircase_build.replay");
    assert_eq!(code, 0);
    assert_eq!(first.lines().filter(|l| l.starts_with("step ")).count(), 4);
    assert!(first.contains(" 1  1  1  1 -3 -1  0  0  0\n"));
    for seed in 0..5 {
        let (code, out, _) = run(
            &["replay", "--oracle", "--seed", &seed.to_string()],
            "staircase_build.replay",
        );
        assert_eq!(code, 0);
        assert_eq!(out, first, "seed {seed}");
    }
}

#[test]
fn compare_reports_the_failed_hypothesis() {
    let (code, out, _) = run(&["compare"], "antidiagonal_step.replay");
    assert_eq!(code, 3);
    assert!(out.contains("hypothesis not met"));
    assert!(out.contains("predicted (1,2)=0, oracle (1,2)=-1"));
    let (code, out, _) = run(&["compare"], "hook_step.replay");
    assert_eq!(code, 3);
    assert!(out.contains("predicted (2,1)=-1, oracle (2,1)=0"));
    // in predict mode the disagreement itself is the failure
    assert_eq!(run(&["compare", "--predict"], "hook_step.replay").0, 1);
}

#[test]
fn strict_addition_refuses_and_predict_flags() {
    let (code, _, err) = run(&["add-row", "--n", "2", "--hit", "2"], "hook.cfg");
    assert_eq!(code, 3);
    assert!(err.contains("ΔM_X(2, 2) = -1"));
    let (code, out, _) = run(
        &["add-row", "--n", "2", "--hit", "2", "--predict"],
        "hook.cfg",
    );
    assert_eq!(code, 0);
    assert!(out.contains("unverified prediction"));
}

#[test]
fn column_addition_to_a_staircase() {
    let (code, out, _) = run(&["add-col", "--n", "3", "--hit", "3"], "single_point.cfg");
    assert_eq!(code, 2, "{out}");
    let (code, out, _) = run(&["add-col", "--n", "1", "--hit", "0,1"], "single_point.cfg");
    assert_eq!(code, 0);
    assert!(out.starts_with("1 1\n1 0\n"), "{out}");
}

#[test]
fn replay_refusal_and_prediction_mismatch() {
    assert_eq!(run(&["replay"], "hook_step.replay").0, 3);
    let (code, out, _) = run(&["replay", "--predict"], "hook_step.replay");
    assert_eq!(code, 1);
    assert!(out.contains("mismatch at step 1"));
}

#[test]
fn json_and_ascii_agree() {
    for file in ["antidiagonal.cfg", "hook.cfg", "staircase_build_final.cfg"] {
        let (_, ascii, _) = run(&["delta"], file);
        let (_, json, _) = run(&["delta", "--format", "json", "--field", "prime"], file);
        assert_eq!(
            parse_ascii(&ascii).unwrap(),
            parse_json(&json).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn checks_and_staircase_verdicts() {
    let (code, out, _) = run(&["check"], "staircase_build_final.cfg");
    assert_eq!(code, 0);
    assert!(out.contains("structure: pass") && out.contains("line counts: pass"));
    assert_eq!(run(&["acm"], "antidiagonal.cfg").0, 1);
    let (code, out, _) = run(&["acm", "--format", "json"], "single_point.cfg");
    assert_eq!(code, 0);
    assert!(out.contains("\"Staircase\""));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = std::env::temp_dir().join(format!("quadric-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("ragged.cfg");
    std::fs::write(&bad, "grid:\nXX\nX\n").unwrap();
    let out = quadric(&["delta", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
    assert_eq!(
        quadric(&["delta", "/nonexistent/file.cfg"]).status.code(),
        Some(2)
    );
    assert_eq!(quadric(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        quadric(&[
            "delta",
            fixture("hook.cfg").to_str().unwrap(),
            "--prime",
            "17"
        ])
        .status
        .code(),
        Some(2)
    );
}
