use std::path::Path;
use std::process::Command;

use serde_json::Value;
use zigzag::cli::run;
use zigzag::necklace::{Alphabet, NecklaceSum};
use zigzag::parse::{parse_cycsum, parse_ncpoly};
use zigzag::quiver::QuiverSpec;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn zz_stdin(args: &[&str], stdin: &str) -> Outcome {
    let mut full = vec!["zigzag"];
    full.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(full, &mut stdin.as_bytes(), &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn zz(args: &[&str]) -> Outcome {
    zz_stdin(args, "")
}

fn ok(args: &[&str]) -> String {
    let o = zz(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.err);
    o.out
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn derivative_example() {
    let out = ok(&["nc", "derive", "--r", "3", "-f", "a^2 b21", "-g", "a"]);
    let spec = QuiverSpec::zigzag(3).unwrap();
    let got = NecklaceSum::from_poly(&parse_ncpoly(out.trim(), &spec).unwrap()).unwrap();
    let expect = NecklaceSum::from_poly(&parse_ncpoly("2 a x2 y", &spec).unwrap()).unwrap();
    assert_eq!(got, expect);
}

#[test]
fn primitive_example() {
    let out = ok(&["primitive", "solve", "-G", "a,b", "-u", "bab+bb", "-u", "aba+ab+ba"]);
    let alph = Alphabet::free(&["a", "b"]);
    assert_eq!(parse_cycsum(out.trim(), &alph).unwrap(), parse_cycsum("1/2 abab + bba", &alph).unwrap());
}

#[test]
fn check_of_a_word_file() {
    let dir = tempfile::tempdir().unwrap();
    let word = dir.path().join("word.json");
    std::fs::write(&word, r#"{"gens": [{"kind": "triangular", "f": "a a b21"}]}"#).unwrap();
    let out = ok(&["auto", "check", "--r", "3", "-w", path_str(&word)]);
    assert!(out.contains("symplectic: true"), "{out}");
    let json: Value =
        serde_json::from_str(&ok(&["auto", "check", "--r", "3", "-w", path_str(&word), "--json"])).unwrap();
    assert_eq!(json["symplectic"], Value::Bool(true));
    let built = ok(&["auto", "build", "--r", "3", "-w", path_str(&word)]);
    assert!(built.lines().count() >= 8, "{built}");
}

#[test]
fn matrices_of_an_embedded_polynomial_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let word = dir.path().join("psi.json");
    ok(&["gl", "psi", "-m", r#"[["1","a^2"],["0","1"]]"#, "-o", path_str(&word)]);
    let out = ok(&["auto", "matrices", "--r", "2", "-w", path_str(&word)]);
    assert!(out.contains("[0; e1]") && out.contains("a^2"), "{out}");
    let inv = dir.path().join("inv.json");
    ok(&["auto", "invert", "--r", "2", "-w", path_str(&word), "-o", path_str(&inv)]);
    let both = ok(&["auto", "compose", "--r", "2", "-w", path_str(&word), "-w", path_str(&inv)]);
    for line in both.lines() {
        let (lhs, rhs) = line.split_once(" -> ").unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn point_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let t = dir.path().join("t.json");
    ok(&["rep", "random", "--n", "3", "--r", "3", "--seed", "4", "-o", path_str(&p)]);
    assert_eq!(
        std::fs::read_to_string(&p).unwrap().trim(),
        ok(&["rep", "random", "--n", "3", "--r", "3", "--seed", "4"]).trim()
    );
    assert!(ok(&["rep", "moment", "-p", path_str(&p)]).contains("on fiber: true"));
    ok(&["nav", "reduce1", "-p", path_str(&p), "--json", "-o", path_str(&t)]);
    let replay: Value = serde_json::from_str(&ok(&["nav", "replay", "-t", path_str(&t), "--json"])).unwrap();
    assert_eq!(replay["ok"], Value::Bool(true));
    let trace: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let nav_word = dir.path().join("nav_word.json");
    std::fs::write(&nav_word, trace["word"].to_string()).unwrap();
    assert_eq!(
        ok(&["auto", "check", "--r", "3", "-w", path_str(&nav_word), "--per-generator"]).trim(),
        "symplectic: true"
    );

    let stdin = std::fs::read_to_string(&p).unwrap();
    let o = zz_stdin(&["rep", "act", "-p", "-", "--r", "3", "--kind", "triangular", "-f", "a^2 b21"], &stdin);
    assert_eq!(o.code, 0, "{}", o.err);
    let q = dir.path().join("q.json");
    std::fs::write(&q, &o.out).unwrap();
    assert_eq!(ok(&["rep", "orbit-eq", "-p", path_str(&p), "-q", path_str(&p)]).trim(), "true");
    let w = dir.path().join("w.json");
    ok(&["nav", "connect", "-p", path_str(&p), "-q", path_str(&q), "-o", path_str(&w)]);
    let moved = dir.path().join("moved.json");
    ok(&["rep", "act", "-p", path_str(&p), "-w", path_str(&w), "-o", path_str(&moved)]);
    assert_eq!(ok(&["rep", "orbit-eq", "-p", path_str(&moved), "-q", path_str(&q)]).trim(), "true");
    let h = ok(&["rep", "hamiltonian", "-p", path_str(&p), "--k", "1"]);
    assert!(h.trim().ends_with('i'), "{h}");
}

#[test]
fn errors_and_exit_codes() {
    let o = zz(&["nc", "derive", "-f", "a", "-g", "zz", "--json"]);
    assert_eq!(o.code, 1);
    let v: Value = serde_json::from_str(o.out.trim()).unwrap();
    assert_eq!(v["error"]["code"], Value::String("UnknownLetter".into()));
    assert_eq!(zz(&["nc", "frobnicate"]).code, 2);
    assert_eq!(zz(&["auto", "check", "--r", "2"]).code, 1);
    assert_eq!(zz(&["rep", "moment", "-p", "/nonexistent/p.json"]).code, 1);
    assert_eq!(zz(&["--help"]).code, 0);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_zigzag");
    let status = |args: &[&str]| Command::new(exe).args(args).output().unwrap();
    let good = status(&["nc", "moment", "--r", "2"]);
    assert_eq!(good.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&good.stdout).starts_with("c = "));
    assert_eq!(status(&["gl", "factor", "-m", r#"[["a","0"],["0","1"]]"#]).status.code(), Some(1));
    assert_eq!(status(&["rep"]).status.code(), Some(2));
}
