use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyfront"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn a() -> String {
    fixture("fixture_a.json").display().to_string()
}

fn b() -> String {
    fixture("fixture_b.json").display().to_string()
}

/// Identity map on the plane over `D`, with the given cone rows.
fn plane_problem(feasible_le: Value, cone: Value) -> Value {
    json!({
        "source_dim": 2,
        "image_dim": 2,
        "feasible": {"dim": 2, "le": feasible_le},
        "cone": {"rows": cone},
        "pieces": [{"domain": {"dim": 2}, "map": [["1", "0"], ["0", "1"]], "offset": ["0", "0"]}]
    })
}

fn write_temp(doc: &Value) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), serde_json::to_string_pretty(doc).unwrap()).unwrap();
    f
}

fn write_text(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn check_reports_verdicts() {
    let o = run(&["check", &a()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("K-function: yes"));
    let o = run(&["check", &b()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("K-function: no"));
}

#[test]
fn uncovered_source_space_is_structural() {
    let mut doc = plane_problem(json!([]), json!([["1", "0"], ["0", "1"]]));
    doc["pieces"][0]["domain"]["le"] = json!([{"a": ["1", "0"], "b": "0"}]);
    let f = write_temp(&doc);
    let o = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("cover: gap at t = "));
}

#[test]
fn inconsistent_pieces_are_structural() {
    let mut doc = plane_problem(json!([]), json!([["1", "0"], ["0", "1"]]));
    let second =
        json!({"domain": {"dim": 2}, "map": [["2", "0"], ["0", "1"]], "offset": ["0", "0"]});
    doc["pieces"].as_array_mut().unwrap().push(second);
    let f = write_temp(&doc);
    let o = run(&["solve", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("disagree"));
}

#[test]
fn parse_errors_exit_1_with_location() {
    let f = write_text("{\n  \"source_dim\": 2,\n  oops\n}");
    let o = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let doc = plane_problem(
        json!([{"a": [0.5, "0"], "b": "0"}]),
        json!([["1", "0"], ["0", "1"]]),
    );
    let f = write_temp(&doc);
    assert_eq!(code(&run(&["check", f.path().to_str().unwrap()])), 1);

    assert_eq!(code(&run(&["check", "/nonexistent/problem.json"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
}

#[test]
fn limits_are_enforced() {
    let mut doc = plane_problem(json!([]), json!([["1", "0"], ["0", "1"]]));
    doc["limits"] = json!({"max_dim": 1});
    let f = write_temp(&doc);
    let o = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("max_dim"));
}

#[test]
fn solve_fixture_a_json() {
    let o = run(&["solve", &a(), "--format", "json", "--method", "both"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["sol"]["pieces"].as_array().unwrap().len(), 1);
    assert_eq!(doc["wsol"]["pieces"].as_array().unwrap().len(), 2);
    assert_eq!(doc["sol_closed"], json!(true));
    assert_eq!(doc["certificates"]["sol"]["connected"], json!(true));
    assert!(doc.get("stats").is_none());
}

#[test]
fn solve_fixture_b_text() {
    let o = run(&["solve", &b()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("{ t1 = 0, t2 < -1 }"), "{text}");
    assert!(text.contains("{ t1 = 0, t2 = 1 }"));
    assert!(text.contains("non-closed, disconnected"));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let first = stdout(&run(&["solve", &b(), "--format", "json", "--stats"]));
    let second = stdout(&run(&["solve", &b(), "--format", "json", "--stats"]));
    assert_eq!(first, second);
    assert!(first.contains("\"lp_count\""));
    let out = tempfile::NamedTempFile::new().unwrap();
    let o = run(&[
        "solve",
        &b(),
        "--format",
        "json",
        "--stats",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(out.path()).unwrap(), first);
}

#[test]
fn infeasible_problem_gives_empty_sets() {
    let doc = plane_problem(
        json!([{"a": ["1", "0"], "b": "-1"}, {"a": ["-1", "0"], "b": "-1"}]),
        json!([["1", "0"], ["0", "1"]]),
    );
    let f = write_temp(&doc);
    let o = run(&["solve", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("Sol: 0 piece(s)"));
}

#[test]
fn cone_without_interior_omits_weak_set() {
    let doc = plane_problem(
        json!([{"a": ["1", "0"], "b": "1"}, {"a": ["-1", "0"], "b": "1"}]),
        json!([["0", "1"], ["0", "-1"], ["1", "0"]]),
    );
    let f = write_temp(&doc);
    let o = run(&["solve", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc.get("wsol").is_none());
    assert!(!doc["notes"].as_array().unwrap().is_empty());
}

#[test]
fn verify_fixtures_and_negative_control() {
    for f in [a(), b()] {
        let o = run(&["verify", &f, "--grid", "-3,3;-3,3", "--steps", "25,25"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).contains("0 mismatch(es)"));
    }
    // the file's own grid is the default
    assert_eq!(code(&run(&["verify", &a()])), 0);
    let o = run(&["verify", &a(), "--corrupt"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("mismatch at t = "));
    let o = run(&["verify", &a(), "--corrupt", "--format", "json", "--quiet"]);
    assert_eq!(code(&o), 4);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!doc["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_grid_flags() {
    assert_eq!(
        code(&run(&["verify", &a(), "--grid", "-3,3", "--steps", "5,5"])),
        2
    );
    assert_eq!(
        code(&run(&["verify", &a(), "--grid", "-3;3", "--steps", "5"])),
        1
    );
    assert_eq!(code(&run(&["verify", &a(), "--grid", "-3,3;-3,3"])), 1);
    assert_eq!(
        code(&run(&[
            "verify",
            &a(),
            "--grid",
            "-3,3;-3,3",
            "--steps",
            "5,x"
        ])),
        1
    );
}

#[test]
fn quiet_suppresses_reports() {
    let o = run(&["--quiet", "check", &a()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
}
