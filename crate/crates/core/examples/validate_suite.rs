//! Runs the acceptance suite in-process and prints the verdict table.
//!
//! cargo run --release --example validate_suite -- [jobs]

use landau_paraxial::config::RunConfig;
use landau_paraxial::validate::run_suite;

fn main() {
    let jobs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    for outcome in run_suite(&RunConfig::default(), jobs) {
        println!("{}", outcome.summary_line());
        for c in &outcome.checks {
            println!(
                "    {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.label,
                c.detail
            );
        }
    }
}
