//! Acceptance gate: runs the ten top-level verification criteria and prints
//! exactly one PASS/FAIL line per criterion.
//!
//! Criteria 1–9 are the in-library checks shared with `pseudocone selftest`;
//! criterion 10 spawns the binary twice and requires exit code 0 with
//! byte-identical reports.

use std::process::Command;
use std::time::Duration;

// Wall-clock budgets for the criteria that carry one.
const BUDGETS: &[(usize, Duration)] = &[
    (1, Duration::from_secs(30)),
    (2, Duration::from_secs(60)),
    (4, Duration::from_secs(60)),
    (7, Duration::from_secs(120)),
];

#[test]
fn acceptance() {
    let results = pseudocone::criteria::run_all_parallel();
    let mut all_pass = true;
    for r in &results {
        println!(
            "criterion {:2} [{}]: {} — {} ({:.2?})",
            r.index,
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail,
            r.elapsed
        );
        all_pass &= r.pass;
        if let Some((_, budget)) = BUDGETS.iter().find(|(i, _)| *i == r.index) {
            if r.elapsed > *budget {
                println!(
                    "criterion {:2} [{}]: FAIL — over budget: {:.2?} > {:.2?}",
                    r.index, r.name, r.elapsed, budget
                );
                all_pass = false;
            }
        }
    }

    // Criterion 10: the CLI selftest exits 0 and its report is byte-identical
    // across independent runs.
    let run_selftest = || {
        Command::new(env!("CARGO_BIN_EXE_pseudocone"))
            .arg("selftest")
            .output()
            .expect("selftest binary runs")
    };
    let a = run_selftest();
    let b = run_selftest();
    let pass10 = a.status.code() == Some(0) && b.status.code() == Some(0) && a.stdout == b.stdout;
    let detail = if pass10 {
        "selftest exits 0 with byte-identical reports".to_string()
    } else {
        format!(
            "exits {:?}/{:?}, stdout identical: {}",
            a.status.code(),
            b.status.code(),
            a.stdout == b.stdout
        )
    };
    println!(
        "criterion 10 [cli-selftest-determinism]: {} — {}",
        if pass10 { "PASS" } else { "FAIL" },
        detail
    );
    all_pass &= pass10;

    assert!(all_pass, "one or more acceptance criteria failed (see lines above)");
}
