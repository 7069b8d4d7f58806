use std::path::Path;
use std::process::{Command, Output};

fn curv4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curv4")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eps_construct_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("eps.json");
    let o = curv4(&["construct", "eps", "--lambda", "1", "--out", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let report = stdout(&o);
    assert!(report.contains("s=-2"), "{report}");
    assert!(report.contains("e-spectrum=-1,0,0,1"));

    let o = curv4(&["classify", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Thm2 s=-2 lambda=1 mu=0 c=0,0,0"));

    let o = curv4(&["check", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weakly_einstein=true"));
}

#[test]
fn construct_to_stdout_and_constraint_messages() {
    let o = curv4(&["construct", "thm1", "--mu", "-3,1,1,1", "--c", "1,-2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("{\"format\": \"curv4.R.v1\""));

    let o = curv4(&["construct", "thm3", "--s", "1", "--lambda", "0", "--xi", "0", "--c", "0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("λ > 0 required"));

    let o = curv4(&["construct", "thm1", "--mu", "1,1,1,1", "--c", "0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = curv4(&["construct", "thm2", "--s", "1", "--lambda", "1", "--mu", "2", "--c", "0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = curv4(&["construct", "thm1", "--mu", "1,-1", "--c", "0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rotated_construction_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let frame = dir.path().join("frame.json");
    let (c, s) = (0.6f64, 0.8f64);
    std::fs::write(
        &frame,
        format!(
            "{{\"format\": \"curv4.frame.v1\", \"columns\": [[{c}, {s}, 0, 0], [{}, {c}, 0, 0], [0, 0, {c}, {s}], [0, 0, {}, {c}]]}}",
            -s, -s
        ),
    )
    .unwrap();
    let file = dir.path().join("t.json");
    let o = curv4(&[
        "construct", "thm2", "--s", "3", "--lambda", "2", "--mu", "0.5", "--c", "0.4,-0.1,-0.3", "--frame", path(&frame),
        "--components", "--out", path(&file),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = curv4(&["classify", path(&file), "--emit-frame"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("Thm2 s=3 lambda=2 mu=0.5 "), "{out}");
    assert!(out.contains("multiplicity=1111"));
    assert!(out.contains("curv4.frame.v1"));
}

#[test]
fn einstein_and_negative_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = dir.path().join("sphere.json");
    assert_eq!(curv4(&["construct", "kn-square", "--b", "1,1,1,1", "--out", path(&sphere)]).status.code(), Some(0));
    let o = curv4(&["classify", path(&sphere)]);
    assert!(stdout(&o).starts_with("Einstein"));
    assert_eq!(o.status.code(), Some(0));

    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, "{\"format\": \"curv4.R.v1\", \"components\": []}").unwrap();
    assert_eq!(curv4(&["check", path(&zero)]).status.code(), Some(0));

    let generic = dir.path().join("generic.json");
    std::fs::write(
        &generic,
        r#"{"format": "curv4.R.v1", "components": [
            {"i": 1, "j": 2, "k": 1, "l": 2, "value": 1.0},
            {"i": 1, "j": 3, "k": 1, "l": 3, "value": 0.3},
            {"i": 1, "j": 2, "k": 1, "l": 3, "value": 0.7},
            {"i": 2, "j": 3, "k": 2, "l": 4, "value": -0.4}]}"#,
    )
    .unwrap();
    assert_eq!(curv4(&["check", path(&generic)]).status.code(), Some(1));
    let o = curv4(&["classify", path(&generic)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NotWeaklyEinstein"));
}

#[test]
fn malformed_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    for text in [
        "not json",
        "{\"format\": \"other\", \"matrix6\": []}",
        "{\"format\": \"curv4.R.v1\", \"components\": [{\"i\": 1, \"j\": 2, \"k\": 3, \"l\": 4, \"value\": 1}]}",
        "{\"format\": \"curv4.R.v1\", \"components\": [{\"i\": 1, \"j\": 2, \"k\": 1, \"l\": 2, \"value\": 1}, {\"i\": 2, \"j\": 1, \"k\": 2, \"l\": 1, \"value\": 2}]}",
    ] {
        std::fs::write(&bad, text).unwrap();
        assert_eq!(curv4(&["check", path(&bad)]).status.code(), Some(3), "{text}");
    }
    assert_eq!(curv4(&["classify", "/nonexistent/file.json"]).status.code(), Some(3));
    assert_eq!(curv4(&["check"]).status.code(), Some(2));
}

#[test]
fn fuzz_is_deterministic() {
    let a = curv4(&["fuzz", "--n", "200", "--seed", "7"]);
    let b = curv4(&["fuzz", "--n", "200", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("passed=200 failed=0"));
    let tight = curv4(&["fuzz", "--n", "50", "--tol", "1e-15"]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn default_fuzz_passes() {
    let o = curv4(&["fuzz"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("passed=1000 failed=0"));
}
