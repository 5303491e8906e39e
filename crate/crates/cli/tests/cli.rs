use std::process::{Command, Output};

fn bmcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmcut"))
        .args(args)
        .output()
        .expect("run bmcut")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn derive_golden_word() {
    let o = bmcut(&[
        "derive",
        "-m",
        "4",
        "-n",
        "3",
        "--word",
        "1,6,7,8,7,8,5,4,5,2",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4,3,4,7,6,1");
}

#[test]
fn substitution_table_has_eighteen_rows() {
    let o = bmcut(&[
        "subst", "-m", "4", "-n", "3", "-i", "1", "-j", "1", "--table",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 18);
    assert!(text.lines().any(|l| l == "v1 -> l2 v1"));
}

#[test]
fn invalid_surface_is_a_usage_error() {
    let o = bmcut(&["surface", "-m", "4", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n >= 3"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(bmcut(&["derive", "--bogus"]).status.code(), Some(2));
}

#[test]
fn surface_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bmcut(&["surface", "-m", "3", "-n", "4", "--svg", "--out", out]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("surface_3_4.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json["polygons"].as_array().unwrap().len(), 3);
    let svg = std::fs::read_to_string(dir.path().join("surface_3_4.svg")).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 3);
}

#[test]
fn trace_with_explicit_start() {
    let o = bmcut(&[
        "trace",
        "-m",
        "4",
        "-n",
        "3",
        "--theta",
        "0.3",
        "--start",
        "0:0.35,0.4",
        "--crossings",
        "12",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim().split(',').count(), 12);
}

#[test]
fn recognize_direction_from_traced_word() {
    let t = bmcut(&["trace", "--theta", "0.3", "--crossings", "20000"]);
    let word = stdout(&t);
    let o = bmcut(&["recognize", "--word", word.trim(), "--tol", "1e-3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let theta: f64 = stdout(&o).trim().parse().unwrap();
    assert!((theta - 0.3).abs() < 1e-3);
}

#[test]
fn recognize_rejects_unknown_branch() {
    let o = bmcut(&["recognize", "--itinerary", "0,1,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generate_then_derive_round_trips() {
    let g = bmcut(&[
        "generate",
        "-m",
        "4",
        "-n",
        "3",
        "-i",
        "2",
        "--word",
        "1,2,3,2,1",
    ]);
    assert!(g.status.success(), "{}", String::from_utf8_lossy(&g.stderr));
    let up = stdout(&g);
    let d = bmcut(&[
        "derive",
        "-m",
        "4",
        "-n",
        "3",
        "--window",
        "--depth",
        "2",
        "--format",
        "json",
        "--word",
        up.trim(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&d)).unwrap();
    assert_eq!(v["sectors"][1], 2);
    assert_eq!(v["words"][1], serde_json::json!([6, 8, 5, 8, 6]));
}

#[test]
fn diagrams_emit_dot() {
    let o = bmcut(&["diagrams", "-m", "3", "-n", "4", "-i", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.contains("digraph T2_3_4")
            && text.contains("digraph D0_3_4")
            && text.contains("graph hooper_3_4")
    );
}

#[test]
fn farey_outputs_are_deterministic() {
    let a = bmcut(&["farey", "-m", "3", "-n", "5", "--format", "json"]);
    let b = bmcut(&["farey", "-m", "3", "-n", "5", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["branches"].as_array().unwrap().len(), 2 * 4);
}

#[test]
fn verify_reports_are_byte_identical() {
    let args = [
        "verify", "-m", "4", "-n", "3", "--trials", "5", "--seed", "3",
    ];
    let a = bmcut(&args);
    let b = bmcut(&args);
    assert!(matches!(a.status.code(), Some(0 | 1)));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 12);
}
