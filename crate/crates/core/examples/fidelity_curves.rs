//! Fidelity of a state with its own time evolution: the pure-state closed
//! form under H_I, the Uhlmann fidelity of a mixed state, and the brute-force
//! evolve-and-compare oracle for both.

use std::f64::consts::PI;

use qspeed::dynamics::{evolve_mixed, evolve_pure};
use qspeed::fidelity::{
    fidelity_mixed, fidelity_pure, fidelity_pure_hi_closed, FidelityCurve, UhlmannCurve,
};
use qspeed::sampling::{sample_mixed_state, sample_pure_state};
use qspeed::{LocalHamiltonian, RandomStream};

fn main() {
    let h = LocalHamiltonian::h_i();
    let mut rng = RandomStream::new(7, 0);
    let psi = sample_pure_state(&mut rng);
    let rho = sample_mixed_state(&mut rng);
    let curve = UhlmannCurve::new(&rho, &h).unwrap();

    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12}",
        "Ω", "pure closed", "pure oracle", "Uhlmann", "mixed oracle"
    );
    for k in 0..=8 {
        let w = k as f64 * PI / 8.0;
        let closed = fidelity_pure_hi_closed(&psi, w);
        let oracle = fidelity_pure(&psi, &evolve_pure(&psi, w, &h));
        let uhl = curve.fidelity_at(w).unwrap();
        let direct = fidelity_mixed(&rho, &evolve_mixed(&rho, w, &h)).unwrap();
        println!("{w:>8.4} {closed:>12.8} {oracle:>12.8} {uhl:>12.8} {direct:>12.8}");
    }
}
