//! Every closed form against its brute-force oracle, plus the audit rows
//! for the expressions that disagree with them as printed.

use qspeed::validate::{run_validation, ValidateParams};

fn main() {
    let report = run_validation(&ValidateParams {
        pure_cases: 2_000,
        ih_cases: 500,
        ..Default::default()
    });
    for c in &report.checks {
        println!(
            "{:<40} {:<12} {:>11.3e} {}",
            c.name,
            c.kind.label(),
            c.statistic,
            if c.passed { "PASS" } else { "FAIL" }
        );
        if !c.note.is_empty() {
            println!("    {}", c.note);
        }
    }
}
