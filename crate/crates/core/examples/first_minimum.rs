//! Locating the first fidelity minimum: the closed form for pure states
//! under H_I next to the numeric scan, and the scan on a mixed state.

use qspeed::fidelity::{omega_min_pure_hi, PureCurve};
use qspeed::minima::{first_minimum_mixed, scan_first_minimum, scan_window, ScanOptions};
use qspeed::sampling::{sample_mixed_state, sample_pure_state};
use qspeed::{LocalHamiltonian, RandomStream};

fn main() {
    let h = LocalHamiltonian::h_i();
    let opts = ScanOptions::default();
    for i in 0..5 {
        let psi = sample_pure_state(&mut RandomStream::new(11, i));
        let numeric =
            scan_first_minimum(&PureCurve::new(&psi, &h), scan_window(&h), &opts).unwrap();
        println!(
            "pure {i}: analytic Ω_min = {:.10}, scan Ω_min = {:.10}, F_min = {:.6}",
            omega_min_pure_hi(&psi),
            numeric.omega,
            numeric.f_min
        );
    }
    for hamiltonian in [LocalHamiltonian::h_i(), LocalHamiltonian::h_ii()] {
        let rho = sample_mixed_state(&mut RandomStream::new(11, 100));
        let m = first_minimum_mixed(&rho, &hamiltonian, &opts).unwrap();
        println!(
            "mixed under {hamiltonian}: Ω_min = {:.10}, F_min = {:.8}",
            m.omega, m.f_min
        );
    }
}
