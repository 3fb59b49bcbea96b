use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use umbral::algebra::MPoly;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn umbral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umbral")).args(args).output().expect("binary runs")
}

fn run_spec(sub: &str, spec: &Path, extra: &[&str]) -> Output {
    let spec = spec.to_str().unwrap();
    let mut args = vec![sub, "--spec", spec];
    args.extend_from_slice(extra);
    umbral(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn golden_outputs_are_reproduced_byte_for_byte() {
    for name in ["abel_identity", "basic_forward", "solve_derivative"] {
        let expected = std::fs::read(golden(&format!("{name}.out"))).unwrap();
        let spec = golden(&format!("{name}.json"));
        let first = run_spec("compute", &spec, &[]);
        let second = run_spec("compute", &spec, &["--jobs", "4"]);
        assert_eq!(first.status.code(), Some(0), "{name}");
        assert_eq!(first.stdout, expected, "{name} differs from its golden file");
        assert_eq!(second.stdout, expected, "{name} depends on the job count");
    }
}

#[test]
fn compute_examples() {
    let abel = stdout(&run_spec("compute", &golden("abel_identity.json"), &[]));
    assert!(abel.contains(r#"{"name":"t","n":[1,1],"poly":[{"exp":[1,1],"coef":"1"}]}"#));
    let basic = stdout(&run_spec("compute", &golden("basic_forward.json"), &[]));
    assert!(basic.starts_with("p(3) = x^3 - 3x^2 + 2x\n"));
    let solve = stdout(&run_spec("compute", &golden("solve_derivative.json"), &["--format", "latex"]));
    assert_eq!(solve, "P = \\frac{3}{2}x^{2} - x + 1\n");
}

#[test]
fn json_results_parse_back_to_the_same_polynomials() {
    let out = run_spec("compute", &golden("abel_identity.json"), &["--max-degree", "3"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let results = value["results"].as_array().unwrap();
    assert_eq!(results.len(), 10);
    for r in results {
        let p = MPoly::from_json(&r["poly"], Some(2)).unwrap();
        assert_eq!(p.to_json(), r["poly"]);
    }
}

#[test]
fn verify_exit_codes() {
    let bad = run_spec("verify", &golden("binomial_perturbed.json"), &[]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("nodes on a linear grid: fail at n=(1,1)"), "{text}");
    assert!(text.contains("binomial identity: fail at n="), "{text}");

    let ok = run_spec("verify", &golden("appell_forward.json"), &[]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));

    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        &dir,
        "bio.json",
        r#"{"dim": 2,
            "system": [{"preset": "backward_diff", "axis": 0}, {"preset": "derivative", "axis": 1}],
            "grid": {"kind": "table", "nodes": [{"k": [1, 0], "z": ["1/3", "5"]}],
                     "base": {"kind": "affine", "v": ["1", "2"], "A": [["1", "1"], ["0", "-2"]]}},
            "target": "verify", "suite": "biorthogonality", "max_degree": 4}"#,
    );
    let out = run_spec("verify", &spec, &["--format", "plain", "--jobs", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "# biorthogonality: pass\n");

    let spec = write_spec(
        &dir,
        "basic.json",
        r#"{"dim": 2,
            "system": [{"sum": [{"preset": "derivative", "axis": 0}, {"preset": "derivative", "axis": 1}]},
                       {"preset": "forward_diff", "axis": 1}],
            "target": "verify", "suite": "basic", "max_degree": 4, "format": "plain"}"#,
    );
    let out = run_spec("verify", &spec, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"dim": 2, "system": [{"preset": "derivative", "axis": 0}, {"preset": "derivative", "axis": 0}],
            "target": "basic", "indices": [[1, 0]]}"#,
        r#"{"dim": 1, "system": [{"preset": "derivative", "axis": 0}], "target": "basic", "indices": [[1, 0]]}"#,
        r#"{"dim": 1, "system": [{"preset": "derivative", "axis": 0}],
            "grid": {"kind": "linear", "A": [["1/0"]]}, "target": "goncarov", "indices": [[1]]}"#,
        r#"{"dim": 1, "system": [{"preset": "derivative", "axis": 0}],
            "grid": {"kind": "linear", "A": [["1"]]}, "target": "solve", "lower_set": [[0], [2]],
            "values": []}"#,
        r#"{"dim": 1, "system": [{"preset": "derivative", "axis": 0}],
            "grid": {"kind": "table", "nodes": [{"k": [0], "z": ["0"]}]}, "target": "goncarov", "indices": [[2]]}"#,
        "not json",
    ];
    for (i, text) in cases.iter().enumerate() {
        let spec = write_spec(&dir, &format!("bad{i}.json"), text);
        let out = run_spec("compute", &spec, &[]);
        assert_eq!(out.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    }
    let missing = umbral(&["compute", "--spec", "/nonexistent/job.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn missing_node_names_the_index() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        &dir,
        "node.json",
        r#"{"dim": 1, "system": [{"preset": "derivative", "axis": 0}],
            "grid": {"kind": "table", "nodes": [{"k": [0], "z": ["0"]}]}, "target": "goncarov", "indices": [[2]]}"#,
    );
    let out = run_spec("compute", &spec, &[]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1)"));
}

#[test]
fn render_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(&dir, "p.json", r#"{"poly": [{"exp": [1, 0], "coef": "-2"}, {"exp": [2, 0], "coef": "1"}]}"#);
    assert_eq!(stdout(&umbral(&["render", "--spec", spec.to_str().unwrap(), "--format", "latex"])), "x^{2} - 2x\n");
    let zero = write_spec(&dir, "z.json", r#"{"dim": 2, "poly": []}"#);
    assert_eq!(stdout(&umbral(&["render", "--spec", zero.to_str().unwrap()])), "0\n");
    let q = write_spec(&dir, "q.json", r#"{"poly": [{"exp": [1, 1], "coef": "3/2"}], "format": "json"}"#);
    assert_eq!(stdout(&umbral(&["render", "--spec", q.to_str().unwrap()])), "[{\"exp\":[1,1],\"coef\":\"3/2\"}]\n");
}

#[test]
fn explain_adds_determinants_and_crosscheck_can_be_disabled() {
    let spec = golden("abel_identity.json");
    let out = stdout(&run_spec("compute", &spec, &["--explain", "--no-crosscheck"]));
    assert!(out.contains("\"det(B+C) at n=(1,1): xy\""));
    assert!(!out.contains("\"checks\""));
    assert!(out.contains("\"crosscheck\":false"));
}

#[test]
fn subcommand_must_match_target() {
    let out = run_spec("verify", &golden("abel_identity.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
}
