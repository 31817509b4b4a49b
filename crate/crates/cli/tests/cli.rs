//! End-to-end tests of the `wordlogic` binary: exit codes and the stable
//! line formats.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wordlogic"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn eval_diagonal_example() {
    let dir = tempfile::tempdir().unwrap();
    let reg = write(dir.path(), "r.reg", "alphabet ab\npred DIAG 2 diag\n");
    let out = run(&[
        "eval",
        "--registry",
        &reg,
        "--sentence",
        "E x1 x2 . a(x1) & a(x2) & DIAG(x1,x2)",
        "--word",
        "bab",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "true\n");

    let out = run(&[
        "eval",
        "--registry",
        &reg,
        "--sentence",
        "E x1 x2 . a(x1) & a(x2) & DIAG(x1,x2)",
        "--word",
        "bb",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn witness_prints_step_lines() {
    let out = run(&["witness", "--col", "col[up:/1]", "--from", "ab", "--to", "ba"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "swap 0 1 a b\n");
}

#[test]
fn witness_detects_profile_mismatch() {
    let out = run(&[
        "witness",
        "--col",
        "col[up:/10, up:/01]",
        "--from",
        "ab",
        "--to",
        "ba",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn member_on_missing_file_is_a_usage_error() {
    let out = run(&["member", "--rec", "no-such-file.rec", "--word", "ab"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-file.rec"));
}

#[test]
fn unknown_verb_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compile_member_equiv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let reg = write(dir.path(), "r.reg", "alphabet ab\npred EV 1 up:/10\npred OD 1 up:/01\n");
    let rec1 = dir.path().join("one.rec");
    let rec2 = dir.path().join("two.rec");

    let out = run(&[
        "compile",
        "--registry",
        &reg,
        "--sentence",
        "(E x1 . a(x1) & EV(x1)) | (E x1 . a(x1) & OD(x1))",
        "--out",
        rec1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "compile",
        "--registry",
        &reg,
        "--sentence",
        "E x1 . a(x1)",
        "--out",
        rec2.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["member", "--rec", rec1.to_str().unwrap(), "--word", "ba"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "true\n");
    let out = run(&["member", "--rec", rec1.to_str().unwrap(), "--word", "bb"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["equiv", "--rec1", rec1.to_str().unwrap(), "--rec2", rec2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "true\n");
}

#[test]
fn equiv_reports_a_separating_word() {
    let dir = tempfile::tempdir().unwrap();
    let reg = write(dir.path(), "r.reg", "alphabet ab\npred EV 1 up:/10\npred OD 1 up:/01\n");
    let rec1 = dir.path().join("evens.rec");
    let rec2 = dir.path().join("odds.rec");
    for (path, sentence) in
        [(&rec1, "E x1 . a(x1) & EV(x1)"), (&rec2, "E x1 . a(x1) & OD(x1)")]
    {
        let out = run(&[
            "compile",
            "--registry",
            &reg,
            "--sentence",
            sentence,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let out = run(&["equiv", "--rec1", rec1.to_str().unwrap(), "--rec2", rec2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "false\nseparating word: a\n");
}

#[test]
fn check_eq_formats() {
    let out = run(&[
        "check-eq",
        "--oracle",
        "factor:ab",
        "--col",
        "col[up:/1]",
        "--max-len",
        "3",
        "--alphabet",
        "ab",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "FAIL fam=swap a=a b=b w=ab j=0,1\n");

    let out = run(&[
        "check-eq",
        "--oracle",
        "parity:a",
        "--col",
        "col[up:/1]",
        "--max-len",
        "4",
        "--alphabet",
        "ab",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "FAIL fam=dup a=a b=b w=aab j=0,1,2\n");

    let out = run(&[
        "check-eq",
        "--oracle",
        "all",
        "--col",
        "col[up:/1]",
        "--max-len",
        "4",
        "--alphabet",
        "ab",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "PASS\n");
}

#[test]
fn search_col_finds_or_rejects() {
    let out = run(&[
        "search-col",
        "--oracle",
        "all",
        "--max-threshold",
        "2",
        "--max-modulus",
        "2",
        "--max-len",
        "4",
        "--alphabet",
        "ab",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "col[up:/1]\n");

    let out = run(&[
        "search-col",
        "--oracle",
        "factor:ab",
        "--max-threshold",
        "3",
        "--max-modulus",
        "3",
        "--max-len",
        "5",
        "--alphabet",
        "ab",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "NONE\n");
}

#[test]
fn chain_files_verify() {
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("chain.txt");
    let out = run(&[
        "witness",
        "--col",
        "col[up:/10, up:/01]",
        "--from",
        "abba",
        "--to",
        "baab",
        "--out",
        chain.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["verify", "--chain", chain.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ok\n");

    // Tamper with the chain: swap across colours.
    let text = fs::read_to_string(&chain).unwrap();
    let bad = text.replace("swap 0 2 a b", "swap 0 1 a b");
    fs::write(&chain, bad).unwrap();
    let out = run(&["verify", "--chain", chain.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pf_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "tail.gw", "a = hat(up:/1)\nb = star(up:/1)\n");
    let disc = write(dir.path(), "disc.gw", "a = star(up:/10)\nb = hat(up:1/0)\n");

    let out = run(&["pf-check", "--gw", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "content-criterion PASS\nbounded-check PASS\n");

    let out = run(&["pf-check", "--gw", &disc, "--max-modulus", "2", "--max-threshold", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout(&out),
        "content-criterion PASS\nbounded-check FAIL col=col[up:1/0, up:0/01, up:/01] cell=1\n"
    );

    let out = run(&["pf-witness", "--gw", &good, "--col", "col[up:/10, up:/01]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "aabb\n");

    let out = run(&["pf-witness", "--gw", &disc, "--col", "col[up:1/0, up:0/01, up:/01]"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "INFEASIBLE cell=1\n");
}

#[test]
fn parse_echoes_canonical_form() {
    let out = run(&[
        "parse",
        "--alphabet",
        "ab",
        "--sentence",
        "!(E x1 . b(x1)) | (E x1 . a(x1))",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "!(E x1 . b(x1)) | E x1 . a(x1)\n");

    let out = run(&["parse", "--alphabet", "ab", "--sentence", "E x . a(y)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unbound variable"));
}
