use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stratwitten"));
    c.env_remove("STRATWITTEN_DATA");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cone_over_circle_table() {
    let o = run(&["cone-spec", "--sphere", "1", "--sign", "plus", "--ibc", "max", "--s", "1", "--cutoff", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("degree 0: 0, 2×2, 4×3, 6×4"), "{out}");
    assert!(out.contains("degree 2: 4, 6×2"), "{out}");
    assert!(out.contains("kernel: (1, 0, 0)"), "{out}");
}

#[test]
fn morse_check_assert() {
    let o = run(&["morse-check", "--beta", "1,0,1", "--nu", "1,0,1", "--assert"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("euler: 2 = 2"));
    let o = run(&["morse-check", "--beta", "1,0,1", "--nu", "1,0,0", "--assert"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_input_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"[{"m_plus": 1, "m_minus": "x"}]"#).unwrap();
    let o = run(&["nu", "--input", p.to_str().unwrap(), "--ibc", "max"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("[0].m_minus"), "{err}");
}

#[test]
fn bad_arguments_exit_2() {
    let o = run(&["cone-spec", "--sphere", "1", "--sign", "plus", "--ibc", "max", "--s", "-1", "--cutoff", "7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["fd-validate", "--R", "1", "--h", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "cone-spec", "--sphere", "2", "--sign", "minus", "--ibc", "min", "--s", "2.5", "--cutoff", "20"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.json");
    let o = run(&[
        "--format", "json", "--output", p.to_str().unwrap(),
        "complex-spec", "--length", "2", "--kappa", "0", "--c", "1",
        "--sign", "plus", "--ibc", "max", "--s", "1", "--cutoff", "10",
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&p).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "complex-spec");
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
    let table: stratwitten::SpectrumTable = serde_json::from_value(v["spectrum"].clone()).unwrap();
    assert_eq!(table.kernel_dims, vec![0, 0, 0]);
}

#[test]
fn csv_output() {
    let o = run(&[
        "--format", "csv", "complex-spec", "--length", "1", "--kappa", "0",
        "--sign", "plus", "--ibc", "max", "--s", "1", "--cutoff", "5",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("degree,eigenvalue,multiplicity,branch"));
    assert!(lines.all(|l| l.split(',').count() == 4));
}

#[test]
fn data_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let link = r#"{"dim": 0, "harmonic_min": [3], "harmonic_max": [3], "pairs": []}"#;
    std::fs::write(dir.path().join("s0.json"), link).unwrap();
    let o = bin()
        .env("STRATWITTEN_DATA", dir.path())
        .args(["cone-spec", "--sphere", "0", "--sign", "plus", "--ibc", "max", "--s", "1", "--cutoff", "1"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("kernel: (3, 0)"), "{}", stdout(&o));
}

#[test]
fn fd_validate_builtin_suite() {
    let o = run(&["fd-validate", "--assert", "--count", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn fd_validate_problem_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, r#"{"kind": "cone_block", "n": 2, "r": 1, "mu": 1.0, "s": 1.0, "sign": "plus"}"#).unwrap();
    let o = run(&["--format", "json", "fd-validate", "--input", p.to_str().unwrap(), "--count", "4", "--assert"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["closed_form"], serde_json::json!([2.0, 6.0, 6.0, 10.0]));
}
