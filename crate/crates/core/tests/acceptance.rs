//! The eight acceptance criteria at full size. Prints one PASS/FAIL line per
//! criterion, then fails if any criterion failed.

use std::io::Write;

use equinorm::suite::{run_criterion, SuiteConfig, CRITERIA};

#[test]
fn acceptance() {
    let config = SuiteConfig::default();
    // bypasses the harness capture so the lines show in a plain `cargo test`
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failed = Vec::new();
    for (k, name) in CRITERIA.iter().enumerate() {
        let report = run_criterion(name, &config).expect("known criterion");
        writeln!(out, "{} {}: {}", if report.passed { "PASS" } else { "FAIL" }, k + 1, name).unwrap();
        if let Some(e) = &report.error {
            writeln!(out, "    error: {e}").unwrap();
        }
        for m in report.failing() {
            writeln!(out, "    {}: {:e} (limit {:e})", m.name, m.value, m.limit).unwrap();
        }
        if !report.passed {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
