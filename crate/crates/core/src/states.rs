//! Two-qubit states, validation, reduced states and concurrence.
//!
//! Basis ordering is `|00⟩, |01⟩, |10⟩, |11⟩`, with the first label for
//! subsystem A.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    hermitian_eig, psd_sqrt_floored, ComplexMatrix, LinalgError, SQRT_ROUND_OFF_FLOOR,
};

/// Tolerance for the norm / trace / Hermiticity invariants.
pub const STATE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated in a density matrix.
pub const NEG_EIGEN_TOL: f64 = 1e-9;
const WOOTTERS_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("state vector is not normalized (|norm² - 1| = {0:e})")]
    NotNormalized(f64),
    #[error("cannot normalize a zero or non-finite vector")]
    Degenerate,
    #[error("invalid density matrix: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One failed state invariant and the size of the failure.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    WrongDimension(usize),
    NonFinite,
    NormViolation(f64),
    NonHermitian(f64),
    /// `|Tr ρ - 1|`.
    TraceViolation(f64),
    /// The offending (most negative) eigenvalue.
    NegativeEigenvalue(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongDimension(d) => write!(f, "dimension {d} (expected 4)"),
            Violation::NonFinite => write!(f, "non-finite entries"),
            Violation::NormViolation(d) => write!(f, "norm off by {d:e}"),
            Violation::NonHermitian(d) => write!(f, "non-Hermitian by {d:e}"),
            Violation::TraceViolation(d) => write!(f, "trace off by {d:e}"),
            Violation::NegativeEigenvalue(l) => write!(f, "negative eigenvalue {l:e}"),
        }
    }
}

/// Diagnostic result of [`validate_density`] / [`validate_amplitudes`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_amplitudes(amps: &[Complex64; 4]) -> ValidationReport {
    let mut report = ValidationReport::default();
    if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        report.violations.push(Violation::NonFinite);
        return report;
    }
    let dev = (amps.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0).abs();
    if dev > STATE_TOL {
        report.violations.push(Violation::NormViolation(dev));
    }
    report
}

/// Checks dimension, Hermiticity, unit trace and positivity of a candidate `ρ`.
pub fn validate_density(m: &ComplexMatrix) -> ValidationReport {
    let mut report = ValidationReport::default();
    if m.dim() != 4 {
        report.violations.push(Violation::WrongDimension(m.dim()));
        return report;
    }
    if !m.is_finite() {
        report.violations.push(Violation::NonFinite);
        return report;
    }
    let herm = m.hermiticity_error();
    if herm > STATE_TOL {
        report.violations.push(Violation::NonHermitian(herm));
    }
    let tr = m.trace();
    let dev = (tr - Complex64::new(1.0, 0.0)).norm();
    if dev > STATE_TOL {
        report.violations.push(Violation::TraceViolation(dev));
    }
    // Positivity is only meaningful for (nearly) Hermitian input.
    if let Ok(eig) = hermitian_eig(m) {
        let lowest = eig.eigenvalues[0];
        if lowest < -NEG_EIGEN_TOL {
            report
                .violations
                .push(Violation::NegativeEigenvalue(lowest));
        }
    }
    report
}

/// Normalized pure state `c0|00⟩ + c1|01⟩ + c2|10⟩ + c3|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2Q {
    amps: [Complex64; 4],
}

impl PureState2Q {
    /// Accepts amplitudes whose squared norm is 1 within `1e-10`.
    pub fn new(amps: [Complex64; 4]) -> Result<Self, StateError> {
        let report = validate_amplitudes(&amps);
        match report.violations.first() {
            None => Ok(Self { amps }),
            Some(Violation::NormViolation(d)) => Err(StateError::NotNormalized(*d)),
            Some(_) => Err(StateError::Degenerate),
        }
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: [Complex64; 4]) -> Result<Self, StateError> {
        let n = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(StateError::Degenerate);
        }
        Ok(Self {
            amps: amps.map(|c| c / n),
        })
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self, StateError> {
        Self::new(amps.map(|a| Complex64::new(a, 0.0)))
    }

    /// Computational basis state `k` (0 → |00⟩, …, 3 → |11⟩).
    pub fn basis(k: usize) -> Self {
        assert!(k < 4, "basis index out of range");
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([h, 0.0, 0.0, h]).expect("normalized")
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    /// `|c_k|²`.
    pub fn populations(&self) -> [f64; 4] {
        self.amps.map(|c| c.norm_sqr())
    }

    pub fn validate(&self) -> ValidationReport {
        validate_amplitudes(&self.amps)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix2Q {
        DensityMatrix2Q::new_unchecked(ComplexMatrix::outer(&self.amps))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Which half of the bipartition to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced density matrix of one qubit, tracing out the other.
pub fn reduced_state(psi: &PureState2Q, keep: Subsystem) -> ComplexMatrix {
    let c = psi.amplitudes();
    let amp = |a: usize, b: usize| c[2 * a + b];
    let mut r = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            r[(i, j)] = (0..2)
                .map(|k| match keep {
                    Subsystem::A => amp(i, k) * amp(j, k).conj(),
                    Subsystem::B => amp(k, i) * amp(k, j).conj(),
                })
                .sum();
        }
    }
    r
}

/// `C = 2|c0 c3 - c1 c2|`.
pub fn concurrence_pure(psi: &PureState2Q) -> f64 {
    let c = psi.amplitudes();
    (2.0 * (c[0] * c[3] - c[1] * c[2]).norm()).min(1.0)
}

/// `C = √(4 det ρ_A)` from the reduced state of subsystem A.
pub fn concurrence_from_reduction(psi: &PureState2Q) -> f64 {
    let r = reduced_state(psi, Subsystem::A);
    let det = (r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)]).re;
    (4.0 * det).max(0.0).sqrt().min(1.0)
}

/// Validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix2Q {
    rho: ComplexMatrix,
}

impl DensityMatrix2Q {
    pub fn new(rho: ComplexMatrix) -> Result<Self, StateError> {
        let report = validate_density(&rho);
        if report.is_ok() {
            Ok(Self { rho })
        } else {
            Err(StateError::Invalid(report))
        }
    }

    /// Skips validation; for matrices that are states by construction.
    pub(crate) fn new_unchecked(rho: ComplexMatrix) -> Self {
        debug_assert_eq!(rho.dim(), 4);
        Self { rho }
    }

    pub fn maximally_mixed() -> Self {
        Self::new_unchecked(ComplexMatrix::from_real_diag(&[0.25; 4]))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// Diagonal of `ρ` in the product basis.
    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.rho[(i, i)].re)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_density(&self.rho)
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        hermitian_eig(&self.rho).map(|e| e.eigenvalues)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `σ_y ⊗ σ_y ρ* σ_y ⊗ σ_y`; in the product basis this is
/// `ρ̃_ij = s_i s_j conj(ρ_{3-i, 3-j})` with signs `s = (1, -1, -1, 1)`.
fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    const SIGN: [f64; 4] = [1.0, -1.0, -1.0, 1.0];
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = rho[(3 - i, 3 - j)].conj() * (SIGN[i] * SIGN[j]);
        }
    }
    out
}

/// Wootters concurrence `max(0, √μ1 - √μ2 - √μ3 - √μ4)`, with `μ` the
/// descending eigenvalues of `ρ ρ̃`, obtained from the Hermitian product
/// `√ρ ρ̃ √ρ` which has the same spectrum.
pub fn concurrence_mixed(rho: &DensityMatrix2Q) -> Result<f64, StateError> {
    let s = psd_sqrt_floored(rho.matrix(), SQRT_ROUND_OFF_FLOOR)?;
    let r = &(&s * &spin_flip(rho.matrix())) * &s;
    let mut mu = hermitian_eig(&r)?.eigenvalues;
    mu.reverse();
    let mut roots = [0.0; 4];
    for (root, &m) in roots.iter_mut().zip(&mu) {
        if m < -WOOTTERS_CLAMP {
            return Err(StateError::Linalg(LinalgError::NotPsd(m)));
        }
        *root = if m < SQRT_ROUND_OFF_FLOOR {
            0.0
        } else {
            m.sqrt()
        };
    }
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0))
}
