//! Random pure states whose first minimum lies in [0.35, 0.4] under H_I,
//! with the fastest state found on each branch of the bound.

use qspeed::experiments::{run_fig1b, Fig1bParams};
use qspeed::AlphaTable;

fn main() {
    let params = Fig1bParams {
        samples: 100_000,
        ..Default::default()
    };
    let r = run_fig1b(&params, AlphaTable::shared()).unwrap();
    println!("{} of {} draws accepted", r.records.len(), r.raw_samples);
    for (name, best) in [("energy", r.fastest_energy), ("spread", r.fastest_spread)] {
        if let Some(b) = best {
            println!(
                "fastest on the {name} branch: τ/T = {:.4} at C = {:.4}, F_min = {:.4}",
                b.record.ratio, b.record.concurrence, b.record.fidelity
            );
        }
    }
    println!(
        "C above √(1 - F_min): {} states; 2|c0 c3| above it: {} states",
        r.boundary_violations().len(),
        r.outer_boundary_violations()
    );
}
