//! Kolmogorov–Smirnov, moment and χ² checks of the samplers against exact
//! laws and independent reference constructions.

use qspeed::experiments::{run_sample_audit, SampleAuditParams};

fn main() {
    let checks = run_sample_audit(&SampleAuditParams {
        seed: 1,
        ks_samples: 20_000,
        moment_samples: 200_000,
    });
    for c in checks {
        println!(
            "{:<40} {:>8} draws  {:>10.3e} vs {:>10.3e}  {}",
            c.name,
            c.samples,
            c.statistic,
            c.threshold,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
}
