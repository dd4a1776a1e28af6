//! The two bound functions α(F) and β(F), the interpolated α table, and
//! the resulting speed-limit time for given energy moments.

use qspeed::qsl::{alpha_direct, beta, qsl_time};
use qspeed::AlphaTable;

fn main() {
    let table = AlphaTable::shared();
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "F", "α table", "α direct", "β"
    );
    for f in [0.0, 0.1, 0.25, 0.35, 0.5, 0.8, 0.95, 1.0] {
        println!(
            "{f:>6.2} {:>12.8} {:>12.8} {:>12.8}",
            table.alpha(f).unwrap(),
            alpha_direct(f).unwrap(),
            beta(f).unwrap()
        );
    }

    // E = 1, ΔE = 1/√2 reaching F = 0: the spread branch dominates
    let b = qsl_time(1.0, 0.5f64.sqrt(), 0.0, table).unwrap();
    println!(
        "T_energy = {:.6}, T_spread = {:.6}, bound = {:.6} ({})",
        b.t_energy,
        b.t_spread,
        b.t_bound,
        b.branch.label()
    );
}
