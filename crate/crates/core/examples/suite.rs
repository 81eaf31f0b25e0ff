//! Runs a few of the acceptance criteria and prints their measurements.

use equinorm::suite::{run_suite, SuiteConfig};

fn main() {
    let config = SuiteConfig {
        only: vec!["fixed-point".into(), "spreading-norm".into(), "corollary".into()],
        ..SuiteConfig::default()
    };
    let report = run_suite(&config).unwrap();
    for c in &report.criteria {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        for m in &c.measurements {
            println!("    {}: {:e}", m.name, m.value);
        }
    }
}
