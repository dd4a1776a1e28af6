//! The pure states that reach a given F_min fastest, their concurrence, and
//! how far they sit from the bound on each branch.

use qspeed::dynamics::{energy_spread, mean_energy};
use qspeed::experiments::fast_state_curve;
use qspeed::minima::{fast_state, fast_state_ratio_limits};
use qspeed::states::concurrence_pure;
use qspeed::{AlphaTable, LocalHamiltonian};

fn main() {
    let h = LocalHamiltonian::h_i();
    let psi = fast_state(0.35).unwrap();
    println!(
        "F_min = 0.35: C = {:.4}, E = {:.4}, ΔE = {:.4}",
        concurrence_pure(&psi),
        mean_energy(&psi, &h),
        energy_spread(&psi, &h).unwrap()
    );

    let curve = fast_state_curve(11, AlphaTable::shared()).unwrap();
    println!(
        "{:>6} {:>8} {:>10} {:>10}",
        "F_min", "C", "τ/T (E)", "τ/T (ΔE)"
    );
    for p in curve {
        println!(
            "{:>6.2} {:>8.4} {:>10.4} {:>10.4}",
            p.f_min, p.concurrence, p.ratio_energy, p.ratio_spread
        );
    }
    let (e, s) = fast_state_ratio_limits();
    println!("limits as F_min → 1: {e:.6}, {s:.6}");
}
