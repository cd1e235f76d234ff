//! End-to-end tests of the command line binary: output formats, exit codes,
//! and byte-level determinism of the report and render paths.

use std::path::PathBuf;
use std::process::{Command, Output};

fn scene(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "scenes", name]
        .iter()
        .collect();
    path.to_str().expect("fixture path is valid UTF-8").to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timelike"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn funk_prints_the_closed_form_value() {
    let out = run(&["funk", "--scene", &scene("flat_funk.json"), "p", "q"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "6.93147180560e-1\n");
}

#[test]
fn funk_accepts_literal_coordinates() {
    let out = run(&["funk", "--scene", &scene("flat_funk.json"), "0,0", "0.5,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "6.93147180560e-1\n");
}

#[test]
fn reversed_pair_is_a_negative_verdict() {
    let out = run(&["funk", "--scene", &scene("flat_funk.json"), "q", "p"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("not ordered"));
}

#[test]
fn order_reports_unrelated_pairs_without_failing() {
    let out = run(&["order", "--scene", &scene("flat_funk.json"), "p", "side"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "unrelated\n");
}

#[test]
fn order_expectation_mismatch_exits_one() {
    let out = run(&[
        "order",
        "--scene",
        &scene("flat_funk.json"),
        "p",
        "q",
        "--expect",
        "unrelated",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "before\n");
    assert!(stderr_of(&out).contains("expected unrelated"));
}

#[test]
fn parse_errors_carry_line_and_column_and_exit_two() {
    let out = run(&["funk", "--scene", &scene("bad.json"), "p", "q"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 1"), "stderr was: {err}");
    assert!(err.contains("column"), "stderr was: {err}");
}

#[test]
fn unknown_point_names_exit_two() {
    let out = run(&["funk", "--scene", &scene("flat_funk.json"), "nowhere", "q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("no point named 'nowhere'"));
}

#[test]
fn hilbert_matches_the_strip_closed_form() {
    let out = run(&["hilbert", "--scene", &scene("strip_hilbert.json"), "a", "b"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "1.09861228867e0\n");
}

#[test]
fn classify_reports_null_and_timelike_pairs() {
    let null = run(&[
        "classify",
        "--scene",
        &scene("desitter.json"),
        "equator",
        "grazing",
    ]);
    assert_eq!(null.status.code(), Some(0));
    assert_eq!(stdout_of(&null), "null\n");
    let timelike = run(&["classify", "--scene", &scene("desitter.json"), "t1", "t2"]);
    assert_eq!(stdout_of(&timelike), "timelike\n");
}

#[test]
fn finsler_and_cone_agree_on_the_wall() {
    let value = run(&["finsler", "--scene", &scene("flat_funk.json"), "p", "1,0"]);
    assert_eq!(value.status.code(), Some(0));
    assert_eq!(stdout_of(&value), "1.00000000000e0\n");
    let inside = run(&[
        "cone",
        "--scene",
        &scene("flat_funk.json"),
        "p",
        "--dir",
        "1,0",
    ]);
    assert_eq!(stdout_of(&inside), "inside\n");
    let outside = run(&[
        "cone",
        "--scene",
        &scene("flat_funk.json"),
        "p",
        "--dir",
        "0,1",
    ]);
    assert_eq!(outside.status.code(), Some(0));
    assert_eq!(stdout_of(&outside), "outside\n");
}

#[test]
fn null_direction_listing_needs_a_projective_context() {
    let listed = run(&["cone", "--scene", &scene("desitter.json"), "equator"]);
    assert_eq!(listed.status.code(), Some(0));
    assert_eq!(stdout_of(&listed).lines().count(), 2);
    let refused = run(&["cone", "--scene", &scene("flat_funk.json"), "p"]);
    assert_eq!(refused.status.code(), Some(2));
}

#[test]
fn length_of_the_fixture_geodesic_is_ln_three() {
    let out = run(&[
        "length",
        "--scene",
        &scene("flat_funk.json"),
        "seg",
        "--samples",
        "2048",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout_of(&out).trim().parse().expect("numeric output");
    assert!((value - 3.0f64.ln()).abs() < 1e-9, "got {value}");
}

#[test]
fn sphere_samples_are_seeded_and_live_on_the_contracted_boundary() {
    let args = [
        "sphere",
        "--scene",
        &scene("flat_funk.json"),
        "p",
        "--radius",
        "0.6931471805599453",
        "--count",
        "4",
        "--seed",
        "3",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout_of(&first), stdout_of(&second));
    let text = stdout_of(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    for line in lines {
        let x: f64 = line.split(' ').next().unwrap().parse().unwrap();
        assert!((x - 0.5).abs() < 1e-9, "sample x was {x}");
    }
}

#[test]
fn desitter_check_passes_and_prints_the_factor_note() {
    let out = run(&[
        "desitter-check",
        "--scene",
        &scene("desitter.json"),
        "--pairs",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("pairs=12 max_rel_dev="), "stdout was: {text}");
    assert!(text.contains("two_sided = 2 * geodesic"), "stdout was: {text}");
}

#[test]
fn check_reports_are_byte_identical_across_runs() {
    let args = ["check", "--suite", "funk", "--seed", "11", "--cases", "40"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert!(text.starts_with("suite funk seed=11 cases=40\n"));
    assert!(text.ends_with("ok: 11/11 properties passed\n"), "stdout was: {text}");
}

#[test]
fn check_rejects_unknown_suites_and_zero_cases() {
    let unknown = run(&["check", "--suite", "sideways"]);
    assert_eq!(unknown.status.code(), Some(2));
    let zero = run(&["check", "--cases", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn render_is_deterministic_and_draws_the_half_radius_arc() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out_path = dir.path().join("wall.svg");
    let out_arg = out_path.to_str().unwrap().to_string();
    let args = [
        "render",
        "--scene",
        &scene("render_wall.json"),
        "--out",
        &out_arg,
        "--sphere-from",
        "p",
        "--sphere-radius",
        "0.6931471805599453",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_of(&first));
    let written = std::fs::read_to_string(&out_path).expect("svg written");
    let piped = run(&[
        "render",
        "--scene",
        &scene("render_wall.json"),
        "--out",
        "-",
        "--sphere-from",
        "p",
        "--sphere-radius",
        "0.6931471805599453",
    ]);
    assert_eq!(stdout_of(&piped), written);
    assert!(written.contains("-1.500000,0.000000"), "arc midpoint missing");
    assert!(written.contains("class=\"sphere\""));
}
