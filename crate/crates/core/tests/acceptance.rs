//! Runs every acceptance criterion against its oracle suite and prints one PASS/FAIL line each.
//!
//! Each criterion also carries a wall-clock budget; exceeding it counts as a failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use planeaut::random::env_seed;
use planeaut::selftest::run_suite;

struct Criterion {
    id: u32,
    title: &'static str,
    suite: &'static str,
    budget: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "decomposition round trip", suite: "decompose", budget: secs(30) },
    Criterion { id: 2, title: "polydegree invariants", suite: "polydegree", budget: secs(60) },
    Criterion { id: 3, title: "diagonal conjugation formula", suite: "diagonal", budget: secs(60) },
    Criterion { id: 4, title: "fiber classifier vs brute force", suite: "fiber", budget: secs(300) },
    Criterion { id: 5, title: "non-cyclic centralizer structure", suite: "noncyclic", budget: secs(60) },
    Criterion { id: 6, title: "pole descent", suite: "kr", budget: secs(300) },
    Criterion { id: 7, title: "perturbation bound soundness", suite: "perturbation", budget: secs(120) },
    Criterion { id: 8, title: "family pipeline over Q[x]", suite: "family", budget: secs(600) },
    Criterion { id: 9, title: "negative controls", suite: "negative", budget: secs(5) },
];

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as --nocapture; a bare word filters by suite name
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let seed = env_seed();
    println!("acceptance: seed {seed}");
    let mut failed = 0;
    let mut ran = 0;
    for c in CRITERIA {
        if !filter.is_empty() && !filter.iter().any(|f| c.suite.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let report = run_suite(c.suite, seed).expect("criterion names a known suite");
        let took = start.elapsed();
        let in_time = took <= c.budget;
        let ok = report.passed() && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {} ({}): {} checks, {} failures, {:.1}s of {}s{}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            report.checks,
            report.failures.len(),
            took.as_secs_f64(),
            c.budget.as_secs(),
            if in_time { "" } else { " (over budget)" },
        );
        for f in report.failures.iter().take(5) {
            println!("    {f}");
        }
        for n in &report.notes {
            println!("    note: {n}");
        }
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
