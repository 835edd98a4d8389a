use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use heisenrep::cli::run;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn heisenrep(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("heisenrep").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn verify_fixtures() {
    for name in ["six_f3.rep.json", "six_q.rep.json", "ga_example.rep.json", "m_ten_f2.rep.json"] {
        let r = heisenrep(&["verify", &fixture(name), "--mode", "both"]);
        assert_eq!(r.code, 0, "{name}: {}{}", r.out, r.err);
    }
    for mode in ["axioms", "relation"] {
        assert_eq!(heisenrep(&["verify", &fixture("six_f3.rep.json"), "--mode", mode]).code, 0);
    }
}

#[test]
fn verify_corrupted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("six_f3.rep.json")).unwrap();
    let bad = text.replace("[1, 6, \"2\"]", "[1, 6, \"1\"]");
    assert_ne!(bad, text);
    let path = tmp(&dir, "bad.json");
    fs::write(&path, bad).unwrap();
    let r = heisenrep(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("coproduct at entry (1,6)"), "{}", r.out);

    let j = heisenrep(&["--json", "verify", path.to_str().unwrap()]);
    assert_eq!(j.code, 1);
    let v: serde_json::Value = serde_json::from_str(&j.out).unwrap();
    assert_eq!(v["ok"], false);
    assert!(!v["checks"][0]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("six_f3.rep.json")).unwrap();
    let path = tmp(&dir, "truncated.json");
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    let r = heisenrep(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("line "), "{}", r.err);

    fs::write(&path, text.replace("\"dimension\": 6", "\"dimension\": 5")).unwrap();
    let r = heisenrep(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("coefficients[0].entries[5]"), "{}", r.err);

    assert_eq!(heisenrep(&["verify", "/nonexistent/file.json"]).code, 2);
    assert_eq!(heisenrep(&["verify"]).code, 2);
    assert_eq!(heisenrep(&["verify", &fixture("six_f3.rep.json"), "--mode", "neither"]).code, 2);
    assert_eq!(heisenrep(&["frobnicate"]).code, 2);
    assert_eq!(heisenrep(&["--help"]).code, 0);
}

#[test]
fn construct_and_expform_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = tmp(&dir, "a.json");
    let b = tmp(&dir, "b.json");
    let lie = fixture("defining_f7.lie.json");
    assert_eq!(heisenrep(&["construct", &lie, "--out", a.to_str().unwrap()]).code, 0);
    assert_eq!(heisenrep(&["expform", &lie, "--out", b.to_str().unwrap()]).code, 0);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text, fs::read_to_string(fixture("defining_f7.rep.json")).unwrap());
    let family = heisenrep::format::read_rep(&text).unwrap();
    let support: Vec<_> = family.support().cloned().collect();
    assert_eq!(support, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);

    let id = heisenrep(&["construct", &fixture("zero_f7.lie.json")]);
    assert_eq!(id.code, 0);
    let family = heisenrep::format::read_rep(&id.out).unwrap();
    assert_eq!(family, heisenrep::rep::CoefficientFamily::trivial(family.group(), family.field(), 3).unwrap());

    for cmd in ["construct", "expform"] {
        let r = heisenrep(&[cmd, &fixture("bad_bracket_f7.lie.json")]);
        assert_eq!(r.code, 1, "{cmd}");
        assert!(r.err.contains("[X0,Y0] != Z0"), "{}", r.err);
        assert_eq!(heisenrep(&[cmd, &fixture("six_f3.rep.json")]).code, 2);
    }
}

#[test]
fn factor_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "layers.json");
    let r = heisenrep(&["factor", &fixture("m_ten_f2.rep.json"), "--check", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("condition (e) at (X0,Y1)"), "{}", r.out);

    let r = heisenrep(&["factor", &fixture("defining_f7.rep.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out, fs::read_to_string(fixture("defining_f7.lie.json")).unwrap());
    let r = heisenrep(&["factor", &fixture("defining_f7.rep.json"), "--check"]);
    assert_eq!(r.code, 0);

    let dir_path = tmp(&dir, "id.json");
    assert_eq!(heisenrep(&["coalg", "--char", "5", "--max-degree", "0", "-o", dir_path.to_str().unwrap()]).code, 0);
    let r = heisenrep(&["factor", dir_path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(heisenrep::format::read_lie(&r.out).unwrap().layers.is_empty());

    let r = heisenrep(&["factor", &fixture("six_q.rep.json")]);
    assert_eq!(r.code, 2);
}

#[test]
fn coalg_commands() {
    let r = heisenrep(&["coalg", "--group", "H1", "--char", "2", "--max-degree", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out, fs::read_to_string(fixture("m_ten_f2.rep.json")).unwrap());
    assert_eq!(r.out, heisenrep(&["coalg", "--char", "2", "--max-degree", "2"]).out);

    let r = heisenrep(&["coalg", "--char", "2", "--max-degree", "3"]);
    let f = heisenrep::format::read_rep(&r.out).unwrap();
    assert_eq!(f.dim(), 20);

    let r = heisenrep(&["coalg", "--group", "Ga", "--rational", "--max-degree", "2"]);
    assert_eq!(r.out, fs::read_to_string(fixture("ga_example.rep.json")).unwrap());

    assert_eq!(heisenrep(&["coalg", "--char", "4", "--max-degree", "1"]).code, 2);
    assert_eq!(heisenrep(&["coalg", "--group", "H2", "--char", "3", "--max-degree", "1"]).code, 2);
    assert_eq!(heisenrep(&["coalg", "--max-degree", "1"]).code, 2);
    assert_eq!(heisenrep(&["coalg", "--char", "3", "--rational", "--max-degree", "1"]).code, 2);
}

#[test]
fn tensor_and_sum_commands() {
    let d = fixture("defining_f7.rep.json");
    let r = heisenrep(&["tensor", "--rep", &d, "--rep", &d]);
    assert_eq!(r.code, 0);
    assert_eq!(heisenrep::format::read_rep(&r.out).unwrap().dim(), 9);
    let r = heisenrep(&["sum", "--rep", &d, "--rep", &d]);
    assert_eq!(heisenrep::format::read_rep(&r.out).unwrap().dim(), 6);

    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "t.json");
    let r = heisenrep(&["--json", "tensor", "--rep", &d, "--rep", &d, "--out", out.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["dimension"], 9);
    assert_eq!(heisenrep(&["verify", out.to_str().unwrap()]).code, 0);

    assert_eq!(heisenrep(&["sum", "--rep", &d]).code, 2);
    assert_eq!(heisenrep(&["sum", "--rep", &d, "--rep", &fixture("six_f3.rep.json")]).code, 2);
}

#[test]
fn search_commands() {
    let r = heisenrep(&["search", "--char", "3", "--dim", "2", "--budget", "1000", "--seed", "42"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("1000 candidate(s) examined"));
    assert!(r.out.contains("no violation found within budget"));

    let args = ["search", "--char", "2", "--dim", "10", "--budget", "1", "--mix", "coalgebra", "--fail-on-violation"];
    let r = heisenrep(&args);
    assert_eq!(r.code, 3);
    assert!(r.out.contains("condition (e) at (X0,Y1)"), "{}", r.out);
    assert_eq!(heisenrep(&args[..args.len() - 1]).code, 0);

    let r = heisenrep(&["--json", "search", "--char", "3", "--dim", "2", "--budget", "1", "--mix", "lie_construct"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["exhausted"], true);
    assert_eq!(v["candidates_examined"], 0);

    let j1 = heisenrep(&["--json", "search", "--char", "2", "--dim", "6", "--budget", "50", "--seed", "9"]);
    let j2 = heisenrep(&["--json", "search", "--char", "2", "--dim", "6", "--budget", "50", "--seed", "9"]);
    assert_eq!(j1.out, j2.out);

    assert_eq!(heisenrep(&["search", "--char", "3", "--budget", "0"]).code, 2);
    assert_eq!(heisenrep(&["search", "--char", "6"]).code, 2);
    assert_eq!(heisenrep(&["search", "--char", "3", "--mix", "tensor=0"]).code, 2);
    assert_eq!(heisenrep(&["search", "--char", "3", "--mix", "nonsense"]).code, 2);
}

#[test]
fn quiet_suppresses_reports() {
    let r = heisenrep(&["--quiet", "verify", &fixture("six_f3.rep.json")]);
    assert_eq!(r.code, 0);
    assert!(r.out.is_empty());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_heisenrep");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["verify", &fixture("six_f3.rep.json")]), Some(0));
    assert_eq!(status(&["factor", &fixture("m_ten_f2.rep.json"), "--check"]), Some(1));
    assert_eq!(status(&["verify", "/nonexistent"]), Some(2));
    assert_eq!(
        status(&["search", "--char", "2", "--dim", "10", "--budget", "1", "--mix", "coalgebra", "--fail-on-violation"]),
        Some(3)
    );
}
