//! Pure-state overlap fidelity, Uhlmann fidelity, and the closed forms
//! available for pure states under `H_I`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{evolve_mixed, LocalHamiltonian, TwoQubitState};
use crate::linalg::{
    hermitian_eig, psd_sqrt_floored, ComplexMatrix, LinalgError, SQRT_ROUND_OFF_FLOOR,
};
use crate::states::{DensityMatrix2Q, PureState2Q, StateError};

const UHLMANN_EIG_CLAMP: f64 = 1e-12;
const DEGENERATE_P03: f64 = 1e-14;
const ARCCOS_SNAP: f64 = 1e-14;

/// `|⟨ψ0|ψ1⟩|²`.
pub fn fidelity_pure(psi0: &PureState2Q, psi1: &PureState2Q) -> f64 {
    psi0.inner(psi1).norm_sqr().min(1.0)
}

/// Survival probability of `ψ` after time `Ω` under any local Hamiltonian:
/// `|Σ_k |c_k|² e^{i E_k Ω}|²`.
pub fn survival_probability(pops: &[f64; 4], omega: f64, h: &LocalHamiltonian) -> f64 {
    let e = h.energies();
    let z: Complex64 = pops
        .iter()
        .zip(&e)
        .map(|(&p, &ek)| Complex64::from_polar(p, ek * omega))
        .sum();
    z.norm_sqr().min(1.0)
}

/// Fidelity `F(Ω)` for a pure state under `H_I`, evaluated as the three-term
/// phasor `|a + b e^{iΩ} + d e^{2iΩ}|²` with `a = |c0|²`,
/// `b = |c1|² + |c2|²`, `d = |c3|²`.
pub fn fidelity_pure_hi_closed(psi: &PureState2Q, omega: f64) -> f64 {
    let p = psi.populations();
    let (a, b, d) = (p[0], p[1] + p[2], p[3]);
    let z = Complex64::new(a, 0.0)
        + Complex64::from_polar(b, omega)
        + Complex64::from_polar(d, 2.0 * omega);
    z.norm_sqr().min(1.0)
}

/// The expanded `H_I` fidelity exactly as it appears in print:
/// `2 p03 cos 2Ω + 2 p03 (1 - s03) cos Ω + (1 - s03)² + |c0|⁴ + |c3|⁴`.
///
/// Its `cos Ω` coefficient disagrees with the evolution oracle; the correct
/// coefficient is `2 s03 (1 - s03)`. Kept only for the audit in
/// [`crate::validate`].
pub fn fidelity_pure_hi_printed(psi: &PureState2Q, omega: f64) -> f64 {
    let p = psi.populations();
    let (a, d) = (p[0], p[3]);
    let p03 = a * d;
    let s03 = a + d;
    2.0 * p03 * (2.0 * omega).cos()
        + 2.0 * p03 * (1.0 - s03) * omega.cos()
        + (1.0 - s03).powi(2)
        + a * a
        + d * d
}

/// Location of the first fidelity minimum for a pure state under `H_I`:
/// `Ω_min = arccos(-(1 - s03) s03 / (4 p03))` with the argument clamped to
/// `[-1, 0]`; `π` when `p03` vanishes.
pub fn omega_min_pure_hi(psi: &PureState2Q) -> f64 {
    let p = psi.populations();
    let (a, d) = (p[0], p[3]);
    let p03 = a * d;
    let s03 = a + d;
    if p03 < DEGENERATE_P03 {
        return PI;
    }
    let arg = (-(1.0 - s03) * s03 / (4.0 * p03)).clamp(-1.0, 0.0);
    // arccos has infinite slope at -1: population round-off of 1e-16 would
    // move a minimum sitting at π by ~1e-8, so snap that case exactly
    if arg < -1.0 + ARCCOS_SNAP {
        return PI;
    }
    arg.acos()
}

/// Uhlmann fidelity before clamping to `[0, 1]`.
pub fn fidelity_mixed_unclamped(
    rho: &DensityMatrix2Q,
    sigma: &DensityMatrix2Q,
) -> Result<f64, StateError> {
    let s = psd_sqrt_floored(rho.matrix(), SQRT_ROUND_OFF_FLOOR)?;
    Ok(root_fidelity_with_sqrt(&s, sigma.matrix())?.powi(2))
}

/// `F(ρ, σ) = (Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity_mixed(rho: &DensityMatrix2Q, sigma: &DensityMatrix2Q) -> Result<f64, StateError> {
    fidelity_mixed_unclamped(rho, sigma).map(|f| f.clamp(0.0, 1.0))
}

/// `Tr √(S σ S)` for a precomputed `S = √ρ`.
fn root_fidelity_with_sqrt(s: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64, LinalgError> {
    let m = &(s * sigma) * s;
    let eig = hermitian_eig(&m)?;
    let mut total = 0.0;
    for &l in &eig.eigenvalues {
        if l < -UHLMANN_EIG_CLAMP {
            return Err(LinalgError::NotPsd(l));
        }
        if l >= SQRT_ROUND_OFF_FLOOR {
            total += l.sqrt();
        }
    }
    Ok(total)
}

/// `Ω ↦ F(s, s(Ω))` for a fixed initial state and Hamiltonian.
pub trait FidelityCurve: Sync {
    fn fidelity_at(&self, omega: f64) -> Result<f64, StateError>;

    /// `dF/dΩ` when it is available in closed form. Lets minimum searches
    /// locate flat minima more precisely than value comparisons can.
    fn derivative_at(&self, _omega: f64) -> Option<f64> {
        None
    }
}

/// Survival probability of a pure state.
#[derive(Debug, Clone)]
pub struct PureCurve {
    pops: [f64; 4],
    h: LocalHamiltonian,
}

impl PureCurve {
    pub fn new(psi: &PureState2Q, h: &LocalHamiltonian) -> Self {
        Self {
            pops: psi.populations(),
            h: *h,
        }
    }
}

impl FidelityCurve for PureCurve {
    fn fidelity_at(&self, omega: f64) -> Result<f64, StateError> {
        Ok(survival_probability(&self.pops, omega, &self.h))
    }

    fn derivative_at(&self, omega: f64) -> Option<f64> {
        // F = |z|², z = Σ p_k e^{i E_k Ω}  ⇒  F' = 2 Re(z̄ z')
        let e = self.h.energies();
        let (mut z, mut dz) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (&p, &ek) in self.pops.iter().zip(&e) {
            let term = Complex64::from_polar(p, ek * omega);
            z += term;
            dz += term * Complex64::new(0.0, ek);
        }
        Some(2.0 * (z.conj() * dz).re)
    }
}

/// Uhlmann fidelity between `ρ` and `ρ(Ω)`, with `√ρ` computed once.
#[derive(Debug, Clone)]
pub struct UhlmannCurve {
    rho: DensityMatrix2Q,
    sqrt_rho: ComplexMatrix,
    h: LocalHamiltonian,
}

impl UhlmannCurve {
    pub fn new(rho: &DensityMatrix2Q, h: &LocalHamiltonian) -> Result<Self, StateError> {
        Ok(Self {
            rho: rho.clone(),
            sqrt_rho: psd_sqrt_floored(rho.matrix(), SQRT_ROUND_OFF_FLOOR)?,
            h: *h,
        })
    }
}

impl FidelityCurve for UhlmannCurve {
    fn fidelity_at(&self, omega: f64) -> Result<f64, StateError> {
        let sigma = evolve_mixed(&self.rho, omega, &self.h);
        let root = root_fidelity_with_sqrt(&self.sqrt_rho, sigma.matrix())?;
        Ok((root * root).clamp(0.0, 1.0))
    }
}

/// Generic curve that evolves and compares through [`TwoQubitState`].
pub struct EvolutionCurve<'a, S: TwoQubitState> {
    pub state: &'a S,
    pub h: LocalHamiltonian,
}

impl<S: TwoQubitState> FidelityCurve for EvolutionCurve<'_, S> {
    fn fidelity_at(&self, omega: f64) -> Result<f64, StateError> {
        self.state.fidelity(&self.state.evolve(omega, &self.h))
    }
}

/// Sampled fidelity along the evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTrace {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
}

impl FidelityTrace {
    pub fn sample(curve: &dyn FidelityCurve, omegas: Vec<f64>) -> Result<Self, StateError> {
        let values = omegas
            .iter()
            .map(|&w| curve.fidelity_at(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { omegas, values })
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_pure;
    use crate::sampling::{
        sample_haar_unitary, sample_mixed_state, sample_pure_state, RandomStream,
    };

    #[test]
    fn pure_fidelity_basics() {
        let mut rng = RandomStream::new(30, 0);
        let psi = sample_pure_state(&mut rng);
        assert!((fidelity_pure(&psi, &psi) - 1.0).abs() < 1e-15);
        assert_eq!(
            fidelity_pure(&PureState2Q::basis(0), &PureState2Q::basis(3)),
            0.0
        );
    }

    #[test]
    fn overlap_matches_direct_sum() {
        let mut rng = RandomStream::new(31, 0);
        let h = LocalHamiltonian::h_ii();
        for k in 0..500 {
            let psi = sample_pure_state(&mut rng);
            let w = 0.037 * k as f64;
            let direct = survival_probability(&psi.populations(), w, &h);
            assert!((fidelity_pure(&psi, &evolve_pure(&psi, w, &h)) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_basics() {
        let mut rng = RandomStream::new(32, 0);
        let psi = sample_pure_state(&mut rng);
        assert!((fidelity_pure_hi_closed(&psi, 0.0) - 1.0).abs() < 1e-15);
        let plus = PureState2Q::from_real([0.5; 4]).unwrap();
        assert!(fidelity_pure_hi_closed(&plus, PI) < 1e-15);
    }

    #[test]
    fn closed_form_matches_evolution() {
        let mut rng = RandomStream::new(33, 0);
        let h = LocalHamiltonian::h_i();
        for k in 0..2000 {
            let psi = sample_pure_state(&mut rng);
            let w = 0.0031 * k as f64;
            let oracle = fidelity_pure(&psi, &evolve_pure(&psi, w, &h));
            assert!((fidelity_pure_hi_closed(&psi, w) - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_curve_derivative_matches_central_difference() {
        let mut rng = RandomStream::new(34, 0);
        let h = LocalHamiltonian::h_ii();
        let dh = 1e-6;
        for k in 0..200 {
            let curve = PureCurve::new(&sample_pure_state(&mut rng), &h);
            let w = 0.031 * k as f64;
            let fd = (curve.fidelity_at(w + dh).unwrap() - curve.fidelity_at(w - dh).unwrap())
                / (2.0 * dh);
            assert!((curve.derivative_at(w).unwrap() - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn omega_min_examples() {
        let f: f64 = 0.35;
        let fast = PureState2Q::from_real([
            ((1.0 + f.sqrt()) / 2.0).sqrt(),
            0.0,
            0.0,
            ((1.0 - f.sqrt()) / 2.0).sqrt(),
        ])
        .unwrap();
        assert!((omega_min_pure_hi(&fast) - PI / 2.0).abs() < 1e-15);
        let plus = PureState2Q::from_real([0.5; 4]).unwrap();
        assert!((omega_min_pure_hi(&plus) - PI).abs() < 1e-15);
    }

    #[test]
    fn omega_min_is_stationary_minimum() {
        let mut rng = RandomStream::new(34, 0);
        for _ in 0..1000 {
            let psi = sample_pure_state(&mut rng);
            let w = omega_min_pure_hi(&psi);
            assert!((PI / 2.0..=PI).contains(&w));
            let h = 1e-3;
            let f = |x| fidelity_pure_hi_closed(&psi, x);
            assert!(f(w - h) + f(w + h) - 2.0 * f(w) >= -1e-14);
        }
    }

    #[test]
    fn uhlmann_identities() {
        let mut rng = RandomStream::new(35, 0);
        for _ in 0..100 {
            let rho = sample_mixed_state(&mut rng);
            assert!((fidelity_mixed(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        }
        let mm = DensityMatrix2Q::maximally_mixed();
        assert!((fidelity_mixed(&mm, &mm).unwrap() - 1.0).abs() < 1e-12);
        let a = DensityMatrix2Q::new(ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let b = DensityMatrix2Q::new(ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(fidelity_mixed(&a, &b).unwrap() < 1e-15);
    }

    #[test]
    fn uhlmann_reduces_to_overlap_for_pure_states() {
        let mut rng = RandomStream::new(36, 0);
        for _ in 0..200 {
            let psi = sample_pure_state(&mut rng);
            let phi = sample_pure_state(&mut rng);
            let f = fidelity_mixed(&psi.projector(), &phi.projector()).unwrap();
            assert!((f - fidelity_pure(&psi, &phi)).abs() < 1e-10);
        }
    }

    #[test]
    fn uhlmann_symmetry_and_unitary_invariance() {
        let mut rng = RandomStream::new(37, 0);
        for _ in 0..200 {
            let rho = sample_mixed_state(&mut rng);
            let sigma = sample_mixed_state(&mut rng);
            let f = fidelity_mixed_unclamped(&rho, &sigma).unwrap();
            assert!(f <= 1.0 + 1e-10);
            assert!((f - fidelity_mixed_unclamped(&sigma, &rho).unwrap()).abs() < 1e-9);
            let u = sample_haar_unitary(4, &mut rng);
            let conj = |m: &DensityMatrix2Q| {
                DensityMatrix2Q::new(&(&u * m.matrix()) * &u.adjoint()).unwrap()
            };
            let g = fidelity_mixed(&conj(&rho), &conj(&sigma)).unwrap();
            assert!((f.clamp(0.0, 1.0) - g).abs() < 1e-9);
        }
    }

    #[test]
    fn curves_agree_with_direct_evaluation() {
        let mut rng = RandomStream::new(38, 0);
        let h = LocalHamiltonian::h_ii();
        let rho = sample_mixed_state(&mut rng);
        let curve = UhlmannCurve::new(&rho, &h).unwrap();
        let generic = EvolutionCurve { state: &rho, h };
        let psi = sample_pure_state(&mut rng);
        let pure = PureCurve::new(&psi, &h);
        let pure_generic = EvolutionCurve { state: &psi, h };
        for k in 0..50 {
            let w = 0.13 * k as f64;
            let a = curve.fidelity_at(w).unwrap();
            let b = generic.fidelity_at(w).unwrap();
            assert!((a - b).abs() < 1e-12);
            assert!(
                (pure.fidelity_at(w).unwrap() - pure_generic.fidelity_at(w).unwrap()).abs() < 1e-12
            );
        }
        let t = FidelityTrace::sample(&curve, vec![0.0, 0.5, 1.0]).unwrap();
        assert!((t.values[0] - 1.0).abs() < 1e-10);
        assert!(t.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }
}
