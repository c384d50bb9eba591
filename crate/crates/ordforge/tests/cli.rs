mod common;

use common::*;
use ordforge::cli::{analyze_report, digest, run, Report};
use ordforge::syntax::Theory;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("ordforge").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn check_exit_codes() {
    let (code, out, _) = call(&["check", &path("pair_cut.proof")]);
    assert_eq!((code, out.trim()), (0, "ok (9 nodes)"));
    let (code, out, _) = call(&["check", &path("eigen_violation.proof")]);
    assert_eq!(code, 1);
    assert!(out.contains("eigenvariable"), "{}", out);
    let bad = std::env::temp_dir().join("ordforge-malformed.proof");
    std::fs::write(&bad, "(rule log :conclusion").unwrap();
    let (code, _, err) = call(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    let (code, _, _) = call(&["check", "/nonexistent/x.proof"]);
    assert_eq!(code, 2);
}

#[test]
fn check_json_is_a_report() {
    let (code, out, _) = call(&["check", "--json", "--theory", "ikpe", &path("eigen_violation.proof")]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["failures"][0]["path"], "r");
}

#[test]
fn analyze_golden() {
    let (code, out, _) = call(&["analyze", "--theory", "ikpp", &path("pair_cut.proof")]);
    assert_eq!(code, 0);
    let rep: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(rep.schema, 1);
    assert_eq!(rep.theory, "ikpp");
    assert_eq!(rep.input_digest, digest(read_fixture("pair_cut.proof").as_bytes()));
    let b = rep.bound.unwrap();
    assert_eq!(b.m, 1);
    assert_eq!(b.final_bound.text, "psi(w^(w^(W+1)))");
    assert_eq!(b.annotations["r"].ordinal.text, "W+1");
    let raw: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(raw["bound"]["final"]["text"], "psi(w^(w^(W+1)))");
}

#[test]
fn analyze_writes_file_and_reports_refusals() {
    let dest = std::env::temp_dir().join("ordforge-report.json");
    let (code, out, _) = call(&["analyze", &path("pair_cut.proof"), "--out", dest.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let rep: Report = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(rep.bound.unwrap().final_bound.text, "phi(psi(w^(w^(W+1))),psi(w^(w^(W+1))))");
    let (code, out, _) = call(&["analyze", &path("eigen_violation.proof")]);
    assert_eq!(code, 1);
    let rep: Report = serde_json::from_str(&out).unwrap();
    assert!(rep.bound.is_none() && !rep.check.ok);
    assert!(rep.error.unwrap().contains("does not check"));
}

#[test]
fn report_serde_round_trip() {
    for th in [Theory::Ikp, Theory::IkpP, Theory::IkpE] {
        let rep = analyze_report(&read_fixture("pair_cut.proof"), th).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
    }
}

#[test]
fn ord_commands() {
    assert_eq!(call(&["ord", "eval", "1+w"]).1, "w\n");
    assert_eq!(call(&["ord", "eval", "phi(0,W+2)"]).1, "w^(W+2)\n");
    assert_eq!(call(&["ord", "eval", "--pretty", "W+1"]).1, "Ω+1\n");
    assert_eq!(call(&["ord", "cmp", "w", "W"]).1, "<\n");
    assert_eq!(call(&["ord", "cmp", "psi(0)", "phi(1,0)"]).1, ">\n");
    assert_eq!(call(&["ord", "in-b", "0", "psi(0)"]).1, "false\n");
    assert_eq!(call(&["ord", "h-contains", "psi(1)", "--eta", "0", "--param", "psi(1)"]).1, "true\n");
    let (code, _, err) = call(&["ord", "eval", "w+"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn hier_commands() {
    let (code, out, _) = call(&["hier", "eval", "--formula", "(all x in a) x in b", "--assign", "a={{}}", "--assign", "b={{},{{}}}"]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
    let (code, out, _) = call(&["hier", "eval", "--formula", "ex z. (ex y in z) (all w in y) ~ w = w", "--stage", "1"]);
    assert_eq!((code, out.as_str()), (0, "false\n"));
    let (code, _, err) = call(&["hier", "eval", "--formula", "x = x", "--assign", "x={}", "--stage", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("cap"), "{}", err);
    let (code, out, _) = call(&["hier", "eval", "--formula", "x in x", "--assign", "x={}", "--stage", "5", "--stage-cap", "5"]);
    assert_eq!((code, out.as_str()), (0, "false\n"));
    let (code, _, _) = call(&["hier", "eval", "--formula", "x = x", "--stage-cap", "6"]);
    assert_eq!(code, 2);
}

#[test]
fn binary_reads_cap_from_environment() {
    let bin = env!("CARGO_BIN_EXE_ordforge");
    let args = ["hier", "eval", "--formula", "x in x", "--assign", "x={}", "--stage", "5"];
    let denied = std::process::Command::new(bin).args(args).env_remove("ORDFORGE_STAGE_CAP").output().unwrap();
    assert_eq!(denied.status.code(), Some(2));
    let allowed = std::process::Command::new(bin).args(args).env("ORDFORGE_STAGE_CAP", "5").output().unwrap();
    assert_eq!(allowed.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&allowed.stdout), "false\n");
}
