//! Integration tests for the command-line interface: exit codes, report
//! determinism, schema errors, and enumeration caps.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudocone"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn check_passes_on_named_fixtures() {
    for fixture in ["cnst-arrow-chaos2", "chaos2-bz2", "pow2-swap", "random"] {
        let out = run(&["check", "--fixture", fixture]);
        assert_eq!(out.status.code(), Some(0), "{fixture}: {:?}", out);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("ok: true"), "{text}");
    }
}

#[test]
fn unknown_fixture_is_a_schema_error() {
    let out = run(&["check", "--fixture", "no-such-fixture"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown fixture"), "{err}");
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["check", "--fixture", "chaos2-bz2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn enumeration_cap_is_exit_three() {
    let out = run(&["pc", "build", "--fixture", "cnst-arrow-pow2", "--max-enumeration", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["check", "--fixture", "random", "--seed", "11", "--format", "json"],
        vec!["pc", "build", "--fixture", "cnst-arrow-chaos2"],
        vec!["pc", "tensor"],
        vec!["equiv", "theta", "--group", "z3", "--twist", "seeded", "--seed", "4"],
        vec!["trace", "--group", "z4", "--space", "regular", "--seed", "9"],
        vec!["emit-fixture", "--fixture", "random", "--seed", "3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {:?}", a);
        assert_eq!(a.stdout, b.stdout, "nondeterministic stdout for {args:?}");
    }
}

#[test]
fn emitted_fixture_parses_as_json() {
    let out = run(&["emit-fixture", "--fixture", "pow2-swap"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["name"], "pow2-swap");
    assert!(doc["base"]["objects"].as_array().unwrap().len() == 1);
}

#[test]
fn emitted_fixture_survives_a_file_round_trip() {
    let out = run(&["emit-fixture", "--fixture", "cnst-arrow-pow2"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let read_back = std::fs::read(&path).unwrap();
    assert_eq!(read_back, out.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&read_back).unwrap();
    assert!(doc["fibres"].as_object().unwrap().len() == 2);
}

#[test]
fn pc_limit_and_colimit_report_the_lattice_bounds() {
    let lim = run(&["pc", "limit", "--fixture", "cnst-arrow-pow2"]);
    assert_eq!(lim.status.code(), Some(0));
    assert!(String::from_utf8(lim.stdout).unwrap().contains("apex[0]: 00"));
    let colim =
        run(&["pc", "limit", "--fixture", "cnst-arrow-pow2", "--orientation", "colimit"]);
    assert_eq!(colim.status.code(), Some(0));
    assert!(String::from_utf8(colim.stdout).unwrap().contains("apex[0]: 11"));
}

#[test]
fn equiv_and_functor_commands_pass() {
    for args in [
        vec!["equiv", "git", "--group", "z2", "--space", "trivial2"],
        vec!["equiv", "chofg", "--twist", "seeded"],
        vec!["equiv", "equivalences", "--which", "quotient", "--core", "disc2"],
        vec!["functor", "lift"],
        vec!["functor", "translate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {:?}", out);
    }
}

#[test]
fn thread_env_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_pseudocone"))
        .args(["check", "--fixture", "chaos2-bz2"])
        .env("PSEUDOCONE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
