use std::io::Write;
use std::path::Path;

use weilc::cli::run;

const CONFIG: &str = r#"
n = 2

[suite]
seed = 5
trials = 12
tol = 1e-9

[algebras.sq]
generators = ["x", "y"]
relations = [[2, 0], [1, 1], [0, 2]]

[expressions]
f = "x1^2"
q = "x1"
p = "x2"
h = "(x1^2 + x2^2)/2"

[fields]
rot = ["-x2", "x1"]

[bivectors.plane]
entries = [[1, 2, "1"]]

[bivectors.bad]
n = 3
entries = [[1, 2, "x3 + 0.1*x1^2"], [2, 3, "x1"], [3, 1, "x2"]]
"#;

fn config(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn go(cfg: &Path, args: &[&str]) -> (i32, String) {
    let mut full = vec!["weilc", "--config", cfg.to_str().unwrap()];
    full.extend(args);
    run(full)
}

#[test]
fn named_definitions_resolve() {
    let c = config(CONFIG);
    assert_eq!(go(c.path(), &["eval", "f", "dual", "--point", "[[3,1],[0,0]]"]), (0, "9 + 6*eps\n".into()));
    let (code, out) = go(c.path(), &["algebra-show", "sq"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("dim=3 height=1 basis=[1, x, y]"), "{out}");
    assert!(out.contains("x * y = 0"));
    let (code, out) = go(c.path(), &["bracket", "plane", "q", "p", "--algebra", "dual", "--point", "[[1,1],[2,0]]"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("{f^A, g^A}(xi) = 1\n"), "{out}");
}

#[test]
fn prolonged_fields() {
    let c = config(CONFIG);
    let (code, out) = go(c.path(), &["prolong", "rot", "dual", "--point", "[[1,1],[2,0]]"]);
    assert_eq!(code, 0);
    assert_eq!(out, "d/dx1: -2\nd/dx2: 1 + eps\n");
    // rot(h) = 0 for the rotation-invariant h
    let (code, out) = go(c.path(), &["prolong", "rot", "dual", "--point", "[[1,1],[2,0]]", "--apply", "h"]);
    assert_eq!((code, out.as_str()), (0, "0\n"));
}

#[test]
fn json_outputs() {
    let c = config(CONFIG);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eval.json");
    let p = path.to_str().unwrap();
    assert_eq!(go(c.path(), &["--json", p, "eval", "sin(x1)", "jets2", "--point", "[[0,1,0],[0,0,0]]"]).0, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!([0.0, 1.0, 0.0]));

    let path = dir.path().join("check.json");
    let p = path.to_str().unwrap();
    assert_eq!(go(c.path(), &["--json", p, "check", "bracket_prolong"]).0, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["suite", "seed", "trials", "max_residual", "pass", "witnesses"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["seed"], 5);
    assert_eq!(v["trials"], 12);
}

#[test]
fn check_exit_codes() {
    let c = config(CONFIG);
    assert_eq!(go(c.path(), &["check", "poisson_full", "--pi", "plane", "--algebra", "dual"]).0, 0);
    let (code, out) = go(c.path(), &["check", "poisson_full", "--pi", "bad", "--algebra", "dual"]);
    assert_eq!(code, 4);
    assert!(out.contains("witness jacobi") || out.contains("witness base_jacobi"), "{out}");
    assert_eq!(go(c.path(), &["check", "poisson_full", "--pi", "nosuch"]).0, 2);
    assert_eq!(go(c.path(), &["check", "nosuch"]).0, 2);
    assert_eq!(go(c.path(), &["--trials", "0", "check", "cartan"]).0, 0);
    assert_eq!(go(c.path(), &["bracket", "bad", "x1", "x2"]).0, 4);
    assert_eq!(go(c.path(), &["bracket", "bad", "x1", "x2", "--force"]).0, 0);
}

#[test]
fn resolution_and_domain_errors() {
    let c = config(CONFIG);
    assert_eq!(go(c.path(), &["eval", "f", "dual", "--point", "[[3,1]]"]).0, 2);
    assert_eq!(go(c.path(), &["eval", "f", "nosuch", "--point", "[[3,1],[0,0]]"]).0, 2);
    assert_eq!(go(c.path(), &["eval", "x3", "dual", "--point", "[[3,1],[0,0]]"]).0, 2);
    assert_eq!(go(c.path(), &["eval", "log(x1)", "dual", "--point", "[[-1,1],[0,0]]"]).0, 3);
    assert_eq!(go(c.path(), &["prolong", "nosuch", "dual", "--point", "[[0,0],[0,0]]"]).0, 2);
    assert_eq!(go(c.path(), &["frobnicate"]).0, 2);
}

#[test]
fn config_errors() {
    let missing = Path::new("/nonexistent/weilc.toml");
    assert_eq!(go(missing, &["algebra-show", "dual"]).0, 1);
    let broken = config("n = [");
    assert_eq!(go(broken.path(), &["algebra-show", "dual"]).0, 1);
    let dup = config("[expressions]\nf = \"x1\"\n[fields]\nf = [\"x1\"]");
    assert_eq!(go(dup.path(), &["algebra-show", "dual"]).0, 1);
}

#[test]
fn reports_are_byte_identical() {
    let c = config(CONFIG);
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("r{k}.json"));
        let (code, _) = go(c.path(), &["--seed", "77", "--json", path.to_str().unwrap(), "check", "poisson_full"]);
        assert_eq!(code, 0);
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}
