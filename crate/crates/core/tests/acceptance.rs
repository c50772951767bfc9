//! One line per acceptance criterion: pass/fail, instance count, runtime
//! against its limit.

use std::time::{Duration, Instant};

use toporing::verify::{determinism, run_suite, SuiteReport};

const SEED: u64 = 20240611;

/// `(suite id, runtime limit in seconds)`.
const LIMITS: &[(u32, u64)] = &[(1, 30), (2, 30), (3, 30), (4, 60), (5, 10), (6, 30), (7, 60), (8, 60), (9, 10), (11, 60)];

fn line(r: &SuiteReport, elapsed: Option<(Duration, u64)>) -> bool {
    let within = elapsed.map_or(true, |(d, limit)| d.as_secs_f64() < limit as f64);
    let ok = r.passed && within;
    let time = elapsed.map_or(String::new(), |(d, limit)| format!(" time={:.2}s limit={limit}s", d.as_secs_f64()));
    println!("criterion {:>2} {:<34} {} count={}{time}", r.id, r.name, if ok { "PASS" } else { "FAIL" }, r.count);
    for f in &r.failures {
        println!("    failure: {f}");
    }
    for n in &r.notes {
        println!("    note: {n}");
    }
    ok
}

#[test]
fn acceptance() {
    let mut reports = Vec::new();
    let mut all = true;
    for &(id, limit) in LIMITS {
        let start = Instant::now();
        let r = run_suite(id, SEED).expect("registered suite");
        all &= line(&r, Some((start.elapsed(), limit)));
        reports.push(r);
    }
    let r = determinism(&reports, SEED);
    all &= line(&r, None);
    assert!(all, "some acceptance criteria failed");
}
