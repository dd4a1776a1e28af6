//! MEMS and IH states under H_II: the MEMS ratio curve against IH averages
//! restricted to draws that decay less than the MEMS of equal concurrence.

use qspeed::experiments::{run_fig5, Fig5Params};
use qspeed::families::MemsState;
use qspeed::{AlphaTable, LocalHamiltonian};

fn main() {
    let h = LocalHamiltonian::h_ii();
    let m = MemsState::new(0.8).unwrap();
    let (e, de) = m.energy_analytic(&h).unwrap();
    println!(
        "MEMS x = 0.8: Ω_min = {:.6} (π/3), E = {e:.4}, ΔE = {de:.4}",
        m.omega_min(&h).unwrap()
    );

    let params = Fig5Params {
        ih_samples: 20_000,
        ..Default::default()
    };
    let r = run_fig5(&params, AlphaTable::shared()).unwrap();
    println!("{} of {} IH draws kept", r.ih_accepted, r.ih_draws);
    println!("{:>6} {:>7} {:>10} {:>10}", "C", "n", "IH mean", "MEMS");
    for b in r.ih_bins.iter().filter(|b| b.reliable) {
        println!(
            "{:>6.3} {:>7} {:>10.4} {:>10.4}",
            b.c_center(),
            b.count,
            b.mean_ratio,
            b.mems_ratio
        );
    }
}
