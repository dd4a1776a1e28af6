//! Random unitaries, spectra and two-qubit states.
//!
//! Mixed states are drawn from the product measure "Haar ⊗ flat simplex":
//! `ρ = U diag(λ) U†` with `U` Haar-distributed and `λ` uniform on the
//! probability simplex. Pure states are drawn from the unitarily invariant
//! (Fubini–Study) measure.
//!
//! Every sampler takes an `Rng`; reproducible parallel sweeps give each
//! Monte Carlo sample its own [`RandomStream`] keyed by `(seed, index)`.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{qr, ComplexMatrix, MAX_DIM};
use crate::states::{DensityMatrix2Q, PureState2Q};

/// Deterministic random stream: identical `(seed, stream_index)` pairs give
/// identical draw sequences, distinct indices give independent streams.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        Self {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Point of the probability simplex: `λ_i ≥ 0`, `Σ λ_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSimplex {
    lambdas: Vec<f64>,
}

impl SpectrumSimplex {
    /// Normalizes nonnegative weights onto the simplex. Returns `None` for
    /// empty input, negative or non-finite weights, or a zero total.
    pub fn from_weights(weights: &[f64]) -> Option<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return None;
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return None;
        }
        Some(Self {
            lambdas: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // E|z|^2 = 1
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random `n × n` unitary: Ginibre matrix, Householder QR, then each
/// column of `Q` is multiplied by the phase of the matching `R` diagonal
/// entry so that the result does not depend on the QR sign convention.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(
        (1..=MAX_DIM).contains(&n),
        "unitary dimension {n} out of range"
    );
    let data = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    let ginibre = ComplexMatrix::from_row_major(n, data).expect("n*n entries");
    let (mut q, r) = qr(&ginibre);
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniform (flat Dirichlet) point on the `n`-simplex from normalized exponentials.
pub fn sample_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SpectrumSimplex {
    assert!(n >= 1, "simplex dimension must be positive");
    loop {
        let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        if let Some(s) = SpectrumSimplex::from_weights(&w) {
            return s;
        }
    }
}

/// `U diag(λ) U†` for a given spectrum and unitary.
pub fn conjugate_spectrum(u: &ComplexMatrix, spectrum: &SpectrumSimplex) -> ComplexMatrix {
    let n = u.dim();
    assert_eq!(n, spectrum.len(), "spectrum length must match unitary");
    let l = spectrum.lambdas();
    let mut rho = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += u[(i, k)] * u[(j, k)].conj() * l[k];
            }
            rho[(i, j)] = acc;
            rho[(j, i)] = acc.conj();
        }
        rho[(i, i)].im = 0.0;
    }
    rho
}

/// Random mixed two-qubit state with a prescribed spectrum and Haar eigenbasis.
pub fn sample_mixed_state_with_spectrum<R: Rng + ?Sized>(
    spectrum: &SpectrumSimplex,
    rng: &mut R,
) -> DensityMatrix2Q {
    let u = sample_haar_unitary(4, rng);
    DensityMatrix2Q::new_unchecked(conjugate_spectrum(&u, spectrum))
}

/// Random mixed two-qubit state from the product measure Haar × flat simplex.
pub fn sample_mixed_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix2Q {
    let spectrum = sample_simplex(4, rng);
    sample_mixed_state_with_spectrum(&spectrum, rng)
}

/// Random pure two-qubit state from the unitarily invariant measure.
pub fn sample_pure_state<R: Rng + ?Sized>(rng: &mut R) -> PureState2Q {
    loop {
        let amps = [
            complex_gaussian(rng),
            complex_gaussian(rng),
            complex_gaussian(rng),
            complex_gaussian(rng),
        ];
        if let Ok(psi) = PureState2Q::normalized(amps) {
            return psi;
        }
    }
}
