//! The acceptance suite as an integration test: every criterion runs at its
//! pinned tolerance and prints one pass/fail line.

use painleve3::verify::{run_all, VerifyOptions};

#[test]
fn acceptance_criteria() {
    let opt = VerifyOptions::default();
    let results = run_all(&opt, &[]);
    let mut failures = Vec::new();
    for r in &results {
        println!(
            "[{}] {:>2} {:<34} {:>7.2}s  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.seconds,
            r.detail
        );
        if !r.pass {
            failures.push(format!("criterion {} ({}): {}", r.id, r.name, r.detail));
        }
    }
    assert_eq!(results.len(), 14, "all criteria must be exercised");
    assert!(
        failures.is_empty(),
        "failed criteria:\n{}",
        failures.join("\n")
    );
}
