//! Random mixed states under H_I: mean τ/T per concurrence window at fixed
//! fidelity checkpoints and around given first-minimum depths.

use qspeed::experiments::{run_fig4, Fig4Params};
use qspeed::AlphaTable;

fn main() {
    let params = Fig4Params {
        samples: 5_000,
        min_count: 20,
        ..Default::default()
    };
    let r = run_fig4(&params, AlphaTable::shared()).unwrap();
    println!("{} states, {} records", r.states.len(), r.record_count());
    for s in &r.slices {
        println!("{} (Spearman {:.3})", s.label, s.trend());
        for w in s.reliable() {
            println!(
                "  C in [{:.2}, {:.2}): n = {:>5}, mean τ/T = {:.4} ± {:.4}",
                w.c_lo, w.c_hi, w.count, w.mean_ratio, w.std_ratio
            );
        }
    }
}
