use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn program(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn agref(args: &[&str], file: &NamedTempFile) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agref"))
        .args(args)
        .arg(file.path())
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn double_negation_models() {
    let f = program("p :- not not p.\n");
    let o = agref(&[], &f);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{}\n{p}\nModels: 2\n");
}

#[test]
fn queens_with_constant() {
    let f = program(agref::oracle::QUEENS);
    let o = agref(&["-c", "n=4"], &f);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.ends_with("Models: 2\n"), "{out}");
    assert!(out.contains("q(1,2)"), "{out}");
}

#[test]
fn ground_mode_prints_one_conjunct_per_line() {
    let f = program("{ q(1..2,1..2) }.\n");
    let o = agref(&["--mode", "ground"], &f);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4, "{out}");
    assert!(out.lines().all(|l| l.contains("-> ⊥")), "{out}");
}

#[test]
fn core_mode_expands_counting_sugar() {
    let f = program(":- 2 { q(X) : r(X) }.\n");
    let o = agref(&["--mode", "core"], &f);
    assert_eq!(stdout(&o), ":- 2 <= #count{ 0,q(X) : q(X), r(X) }.\n");
}

#[test]
fn inconsistent_models_are_dropped_and_listed() {
    let f = program("p. -p :- not q. q :- not r. r :- not q.\n");
    let o = agref(&[], &f);
    assert_eq!(stdout(&o), "{p, q}\nModels: 1\n");
    let o = agref(&["--list-inconsistent"], &f);
    let out = stdout(&o);
    assert!(out.contains("inconsistent: {p, r, ~p}"), "{out}");
}

#[test]
fn model_limit_counts_consistent_models() {
    let f = program("{ a; b }.\n");
    let o = agref(&["--models", "3"], &f);
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.starts_with('{')).count(),
        3,
        "{out}"
    );
    assert!(out.ends_with("Models: 3+\n"), "{out}");
}

#[test]
fn parse_error_exits_with_two() {
    let f = program("p(.\n");
    let o = agref(&[], &f);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn missing_file_exits_with_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_agref"))
        .arg("/nonexistent/program.ag")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn aggregate_over_budget_exits_with_one() {
    let f = program(agref::oracle::QUEENS);
    let o = agref(&["-c", "n=4", "--no-simplify"], &f);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn check_mode_passes() {
    let o = Command::new(env!("CARGO_BIN_EXE_agref"))
        .args(["--mode", "check"])
        .output()
        .unwrap();
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.lines().any(|l| l.starts_with("PASS")));
    assert!(!out.lines().any(|l| l.starts_with("FAIL")), "{out}");
}

#[test]
fn output_is_stable_across_runs() {
    let f = program(agref::oracle::QUEENS);
    let a = stdout(&agref(&["-c", "n=5"], &f));
    let b = stdout(&agref(&["-c", "n=5"], &f));
    assert_eq!(a, b);
}
