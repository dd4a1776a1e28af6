//! Local Hamiltonians `H = H_A ⊗ I + I ⊗ H_B` and the exact dynamics they generate.
//!
//! Units: `ħ = ε = 1`, so energies are multiples of ε and time is the
//! dimensionless `Ω = tε/ħ`. The Hamiltonian is diagonal in the product
//! basis with eigenvalues `(0, δ_B, δ_A, δ_A + δ_B)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fidelity::{fidelity_mixed, fidelity_pure};
use crate::states::{
    concurrence_mixed, concurrence_pure, DensityMatrix2Q, PureState2Q, StateError,
};

/// Variance radicands in `[-1e-12, 0)` are treated as zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("level splittings must be positive and finite (got δ_A = {0}, δ_B = {1})")]
    InvalidSplitting(f64, f64),
    #[error("cannot parse Hamiltonian `{0}` (expected hI, hII or custom:<δA>,<δB>)")]
    Parse(String),
    #[error("negative energy variance {0:e}")]
    NegativeVariance(f64),
}

/// `(δ_A, δ_B)` pair defining a local two-qubit Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalHamiltonian {
    delta_a: f64,
    delta_b: f64,
}

impl LocalHamiltonian {
    pub fn new(delta_a: f64, delta_b: f64) -> Result<Self, DynamicsError> {
        let ok = |d: f64| d.is_finite() && d > 0.0;
        if ok(delta_a) && ok(delta_b) {
            Ok(Self { delta_a, delta_b })
        } else {
            Err(DynamicsError::InvalidSplitting(delta_a, delta_b))
        }
    }

    /// `δ_A = δ_B = 1`, spectrum `{0, 1, 1, 2}`.
    pub fn h_i() -> Self {
        Self {
            delta_a: 1.0,
            delta_b: 1.0,
        }
    }

    /// `δ_A = 2, δ_B = 1`, spectrum `{0, 1, 2, 3}`.
    pub fn h_ii() -> Self {
        Self {
            delta_a: 2.0,
            delta_b: 1.0,
        }
    }

    pub fn delta_a(&self) -> f64 {
        self.delta_a
    }

    pub fn delta_b(&self) -> f64 {
        self.delta_b
    }

    /// `Δ⁺ = δ_A + δ_B`.
    pub fn delta_plus(&self) -> f64 {
        self.delta_a + self.delta_b
    }

    /// `Δ⁻ = δ_A - δ_B`.
    pub fn delta_minus(&self) -> f64 {
        self.delta_a - self.delta_b
    }

    /// Eigenvalues on `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn energies(&self) -> [f64; 4] {
        [0.0, self.delta_b, self.delta_a, self.delta_a + self.delta_b]
    }

    pub fn is_h_i(&self) -> bool {
        self.delta_a == 1.0 && self.delta_b == 1.0
    }

    /// Recurrence period `2π / gcd(δ_A, δ_B)` when both splittings are
    /// rational with denominators up to 10⁴; `None` otherwise.
    pub fn period(&self) -> Option<f64> {
        let (pa, qa) = rational_approx(self.delta_a)?;
        let (pb, qb) = rational_approx(self.delta_b)?;
        // gcd(pa/qa, pb/qb) = gcd(pa*qb, pb*qa) / (qa*qb)
        let g = gcd(pa * qb, pb * qa) as f64 / (qa * qb) as f64;
        Some(2.0 * PI / g)
    }
}

impl Default for LocalHamiltonian {
    fn default() -> Self {
        Self::h_i()
    }
}

impl fmt::Display for LocalHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::h_i() {
            write!(f, "hI")
        } else if *self == Self::h_ii() {
            write!(f, "hII")
        } else {
            write!(f, "custom:{},{}", self.delta_a, self.delta_b)
        }
    }
}

impl FromStr for LocalHamiltonian {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hI" | "HI" | "h1" => Ok(Self::h_i()),
            "hII" | "HII" | "h2" => Ok(Self::h_ii()),
            _ => {
                let body = s
                    .strip_prefix("custom:")
                    .ok_or_else(|| DynamicsError::Parse(s.to_string()))?;
                let (a, b) = body
                    .split_once(',')
                    .ok_or_else(|| DynamicsError::Parse(s.to_string()))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| DynamicsError::Parse(s.to_string()))
                };
                Self::new(parse(a)?, parse(b)?)
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Continued-fraction approximation `x ≈ p/q` with `q ≤ 10⁴`, accepted only
/// when it reproduces `x` to 1e-12 relative.
fn rational_approx(x: f64) -> Option<(u64, u64)> {
    const MAX_DEN: u64 = 10_000;
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DEN {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - x).abs() <= 1e-12 * x {
            return Some((h1, k1));
        }
        let frac = r - r.floor();
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Common interface of pure and mixed two-qubit states under local dynamics.
pub trait TwoQubitState: Clone + Send + Sync {
    /// Diagonal of the state in the product (energy) basis.
    fn populations(&self) -> [f64; 4];

    /// The state at time `Ω`.
    fn evolve(&self, omega: f64, h: &LocalHamiltonian) -> Self;

    /// Fidelity between `self` and `other`.
    fn fidelity(&self, other: &Self) -> Result<f64, StateError>;

    fn concurrence(&self) -> Result<f64, StateError>;
}

impl TwoQubitState for PureState2Q {
    fn populations(&self) -> [f64; 4] {
        PureState2Q::populations(self)
    }

    fn evolve(&self, omega: f64, h: &LocalHamiltonian) -> Self {
        evolve_pure(self, omega, h)
    }

    fn fidelity(&self, other: &Self) -> Result<f64, StateError> {
        Ok(fidelity_pure(self, other))
    }

    fn concurrence(&self) -> Result<f64, StateError> {
        Ok(concurrence_pure(self))
    }
}

impl TwoQubitState for DensityMatrix2Q {
    fn populations(&self) -> [f64; 4] {
        DensityMatrix2Q::populations(self)
    }

    fn evolve(&self, omega: f64, h: &LocalHamiltonian) -> Self {
        evolve_mixed(self, omega, h)
    }

    fn fidelity(&self, other: &Self) -> Result<f64, StateError> {
        fidelity_mixed(self, other)
    }

    fn concurrence(&self) -> Result<f64, StateError> {
        concurrence_mixed(self)
    }
}

/// `c_k(Ω) = c_k e^{-i E_k Ω}`.
pub fn evolve_pure(psi: &PureState2Q, omega: f64, h: &LocalHamiltonian) -> PureState2Q {
    let e = h.energies();
    let a = psi.amplitudes();
    let amps = [0, 1, 2, 3].map(|k| a[k] * Complex64::from_polar(1.0, -e[k] * omega));
    PureState2Q::new(amps).unwrap_or(*psi)
}

/// `ρ_ij(Ω) = ρ_ij e^{-i (E_i - E_j) Ω}`.
pub fn evolve_mixed(rho: &DensityMatrix2Q, omega: f64, h: &LocalHamiltonian) -> DensityMatrix2Q {
    let e = h.energies();
    let mut out = rho.matrix().clone();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                out[(i, j)] *= Complex64::from_polar(1.0, -(e[i] - e[j]) * omega);
            }
        }
    }
    DensityMatrix2Q::new_unchecked(out)
}

/// `(⟨H⟩, ⟨H²⟩)` from populations.
fn moments(pops: &[f64; 4], h: &LocalHamiltonian) -> (f64, f64) {
    let e = h.energies();
    let m1 = pops.iter().zip(&e).map(|(p, e)| p * e).sum();
    let m2 = pops.iter().zip(&e).map(|(p, e)| p * e * e).sum();
    (m1, m2)
}

/// `E = Tr(ρH)` in units of ε (ground energy 0).
pub fn mean_energy<S: TwoQubitState>(state: &S, h: &LocalHamiltonian) -> f64 {
    moments(&state.populations(), h).0
}

/// `ΔE = √(Tr(ρH²) - E²)`.
pub fn energy_spread<S: TwoQubitState>(
    state: &S,
    h: &LocalHamiltonian,
) -> Result<f64, DynamicsError> {
    spread_from_populations(&state.populations(), h)
}

pub(crate) fn spread_from_populations(
    pops: &[f64; 4],
    h: &LocalHamiltonian,
) -> Result<f64, DynamicsError> {
    let (m1, m2) = moments(pops, h);
    let var = m2 - m1 * m1;
    if var < -VARIANCE_CLAMP {
        return Err(DynamicsError::NegativeVariance(var));
    }
    Ok(var.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_mixed_state, sample_pure_state, RandomStream};

    #[test]
    fn presets_and_parsing() {
        assert_eq!(LocalHamiltonian::h_i().energies(), [0.0, 1.0, 1.0, 2.0]);
        assert_eq!(LocalHamiltonian::h_ii().energies(), [0.0, 1.0, 2.0, 3.0]);
        assert_eq!(
            "hI".parse::<LocalHamiltonian>().unwrap(),
            LocalHamiltonian::h_i()
        );
        assert_eq!(
            "hII".parse::<LocalHamiltonian>().unwrap(),
            LocalHamiltonian::h_ii()
        );
        let h: LocalHamiltonian = "custom:1.5,0.5".parse().unwrap();
        assert_eq!((h.delta_a(), h.delta_b()), (1.5, 0.5));
        assert!("custom:1,-1".parse::<LocalHamiltonian>().is_err());
        assert!("bogus".parse::<LocalHamiltonian>().is_err());
        assert_eq!(h.to_string().parse::<LocalHamiltonian>().unwrap(), h);
    }

    #[test]
    fn periods() {
        assert!((LocalHamiltonian::h_i().period().unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((LocalHamiltonian::h_ii().period().unwrap() - 2.0 * PI).abs() < 1e-15);
        let h = LocalHamiltonian::new(1.5, 0.5).unwrap();
        assert!((h.period().unwrap() - 4.0 * PI).abs() < 1e-12);
        let h = LocalHamiltonian::new(2.0, 4.0).unwrap();
        assert!((h.period().unwrap() - PI).abs() < 1e-12);
        assert!(LocalHamiltonian::new(1.0, 2f64.sqrt())
            .unwrap()
            .period()
            .is_none());
    }

    #[test]
    fn pure_evolution_basics() {
        let mut rng = RandomStream::new(20, 0);
        let psi = sample_pure_state(&mut rng);
        let h = LocalHamiltonian::h_i();
        assert_eq!(evolve_pure(&psi, 0.0, &h), psi);
        let g = evolve_pure(&PureState2Q::basis(0), 1.234, &h);
        assert_eq!(g, PureState2Q::basis(0));
        let back = evolve_pure(&psi, 2.0 * PI, &h);
        assert!((fidelity_pure(&psi, &back) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_evolution_matches_phase_pattern() {
        let mut rng = RandomStream::new(21, 0);
        let rho = sample_mixed_state(&mut rng);
        let h = LocalHamiltonian::new(1.3, 0.7).unwrap();
        let w = 0.9;
        let out = evolve_mixed(&rho, w, &h);
        let (da, db) = (h.delta_a(), h.delta_b());
        let expect = |i: usize, j: usize, phase: f64| {
            rho.matrix()[(i, j)] * Complex64::from_polar(1.0, phase * w)
        };
        let m = out.matrix();
        assert!((m[(0, 1)] - expect(0, 1, db)).norm() < 1e-15);
        assert!((m[(0, 2)] - expect(0, 2, da)).norm() < 1e-15);
        assert!((m[(0, 3)] - expect(0, 3, da + db)).norm() < 1e-15);
        assert!((m[(1, 2)] - expect(1, 2, da - db)).norm() < 1e-15);
        assert!((m[(1, 3)] - expect(1, 3, da)).norm() < 1e-15);
        assert!((m[(2, 3)] - expect(2, 3, db)).norm() < 1e-15);
        assert!((m[(2, 1)] - expect(2, 1, -(da - db))).norm() < 1e-15);
    }

    #[test]
    fn diagonal_states_are_stationary() {
        let rho = DensityMatrix2Q::new(crate::linalg::ComplexMatrix::from_real_diag(&[
            0.1, 0.2, 0.3, 0.4,
        ]))
        .unwrap();
        let out = evolve_mixed(&rho, 2.2, &LocalHamiltonian::h_ii());
        assert_eq!(out, rho);
        assert_eq!(evolve_mixed(&rho, 0.0, &LocalHamiltonian::h_i()), rho);
    }

    #[test]
    fn mixed_and_pure_channels_agree() {
        let mut rng = RandomStream::new(22, 0);
        let h = LocalHamiltonian::h_ii();
        for k in 0..100 {
            let psi = sample_pure_state(&mut rng);
            let w = 0.1 * k as f64;
            let a = evolve_mixed(&psi.projector(), w, &h);
            let b = evolve_pure(&psi, w, &h).projector();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn energy_examples() {
        let h = LocalHamiltonian::h_i();
        assert_eq!(mean_energy(&PureState2Q::basis(3), &h), 2.0);
        assert_eq!(energy_spread(&PureState2Q::basis(3), &h).unwrap(), 0.0);
        for f in [0.0f64, 0.25, 0.64] {
            let psi = PureState2Q::from_real([
                ((1.0 + f.sqrt()) / 2.0).sqrt(),
                0.0,
                0.0,
                ((1.0 - f.sqrt()) / 2.0).sqrt(),
            ])
            .unwrap();
            assert!((mean_energy(&psi, &h) - (1.0 - f.sqrt())).abs() < 1e-12);
            assert!((energy_spread(&psi, &h).unwrap() - (1.0 - f).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_variance_is_an_error() {
        let pops = [-0.5, 0.0, 0.0, 1.5];
        assert!(matches!(
            spread_from_populations(&pops, &LocalHamiltonian::h_i()),
            Err(DynamicsError::NegativeVariance(_))
        ));
    }
}
