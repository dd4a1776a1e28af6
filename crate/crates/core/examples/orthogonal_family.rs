//! Pure states that become orthogonal to themselves at time Ω under H_I:
//! the ratio τ/T spans [1, √2] and reaches 1 only when C = 1.

use qspeed::experiments::{run_fig1a, Fig1aParams};
use qspeed::AlphaTable;

fn main() {
    let params = Fig1aParams {
        c_bins: 10,
        ..Default::default()
    };
    let r = run_fig1a(&params, AlphaTable::shared()).unwrap();
    println!("{} family members", r.points.len());
    println!(
        "separable (C = 0): {} points, ratio in [{:.9}, {:.9}]",
        r.separable.count, r.separable.ratio_min, r.separable.ratio_max
    );
    for b in &r.bins {
        println!(
            "C in [{:.1}, {:.1}): {:>5} points, ratio in [{:.6}, {:.6}]",
            b.c_lo, b.c_hi, b.count, b.ratio_min, b.ratio_max
        );
    }
}
