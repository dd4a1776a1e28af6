//! Maximally entangled mixed states (MEMS) and Ishizaka–Hiroshima (IH)
//! states: constructors, closed-form fidelities, energy moments and first
//! minima.
//!
//! Both families are block diagonal in the product basis: a 2×2 coherent
//! block plus stationary diagonal entries. The block picks up the phase
//! `e^{-iΔ⁺Ω}` (MEMS, on `|00⟩, |11⟩`) or `e^{iΔ⁻Ω}` (IH, on `|01⟩, |10⟩`).
//! For a block `[[a, b], [b, a]]` the Uhlmann root fidelity is
//! `√(4a² - 2b²(1 - cos φ))`, so
//!
//! ```text
//! F = (A + √(4a² - 2b²(1 - cos φ)))²
//! ```
//!
//! with `A` the stationary weight. The same value can be written as
//! `(A + ½(√(B + √C) + √(B - √C)))²` with
//!
//! ```text
//! MEMS: A = 1 - 2g, B = 4g² + x² cos φ, C = x²(1 + cos φ)(8g² + x²(cos φ - 1))
//! IH:   A = p2 + p4, B = (p1 + p3)² + (p1 - p3)² cos φ, C = (p1 - p3)² C'
//! C' = (1 + cos φ)((p1² + p3²)(1 + cos φ) + 2 p1 p3 (3 - cos φ))
//! ```
//!
//! but `B - √C` cancels to zero for MEMS with `x ≥ 2/3`, which costs about
//! eight digits, so the evaluators here use the block form. The nested form
//! is kept in [`NestedRootForm`] together with the variants that appear in
//! print (first MEMS factor `cos φ - 1`, IH `C` without the `(p1 - p3)²`
//! prefactor) for auditing.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{energy_spread, mean_energy, DynamicsError, LocalHamiltonian};
use crate::linalg::ComplexMatrix;
use crate::qsl::{qsl_time, AlphaTable, Branch, QslBound, QslError};
use crate::sampling::sample_simplex;
use crate::states::DensityMatrix2Q;

/// Radicands down to this are treated as round-off and clamped to zero.
pub const RADICAND_TOL: f64 = 1e-10;
const SPECTRUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),
    #[error("IH eigenvalues must satisfy p1 ≥ p2 ≥ p3 ≥ p4 ≥ 0, got {0:?}")]
    UnorderedEigenvalues([f64; 4]),
    #[error("negative radicand {0}")]
    NegativeRadicand(f64),
    #[error("state is stationary under this Hamiltonian")]
    Stationary,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Qsl(#[from] QslError),
}

fn checked_sqrt(v: f64) -> Result<f64, FamilyError> {
    if v < -RADICAND_TOL {
        return Err(FamilyError::NegativeRadicand(v));
    }
    Ok(v.max(0.0).sqrt())
}

/// Block form `(A + √(4a² - 2b²(1 - cos φ)))²`.
fn block_fidelity(stationary: f64, diag: f64, off: f64, cos_phi: f64) -> Result<f64, FamilyError> {
    let root = checked_sqrt(4.0 * diag * diag - 2.0 * off * off * (1.0 - cos_phi))?;
    Ok((stationary + root).powi(2).min(1.0))
}

fn real_matrix(rows: [[f64; 4]; 4]) -> ComplexMatrix {
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    ComplexMatrix::from_real_rows(&refs).expect("square rows")
}

/// `g(x)`: `1/3` up to `x = 2/3`, `x/2` above.
pub fn mems_g(x: f64) -> f64 {
    if x <= 2.0 / 3.0 {
        1.0 / 3.0
    } else {
        0.5 * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemsState {
    x: f64,
}

impl MemsState {
    pub fn new(x: f64) -> Result<Self, FamilyError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(FamilyError::OutOfDomain(format!(
                "MEMS needs x in [0, 1], got {x}"
            )));
        }
        Ok(Self { x })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn g(&self) -> f64 {
        mems_g(self.x)
    }

    /// `[[g, 0, 0, x/2], [0, 1-2g, 0, 0], [0, 0, 0, 0], [x/2, 0, 0, g]]`.
    pub fn density(&self) -> DensityMatrix2Q {
        let g = self.g();
        let h = 0.5 * self.x;
        let m = real_matrix([
            [g, 0.0, 0.0, h],
            [0.0, 1.0 - 2.0 * g, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [h, 0.0, 0.0, g],
        ]);
        DensityMatrix2Q::new_unchecked(m)
    }

    /// `F(ρ, ρ(Ω))`; depends on `Ω` only through `cos(Δ⁺Ω)`.
    pub fn fidelity(&self, omega: f64, h: &LocalHamiltonian) -> Result<f64, FamilyError> {
        let g = self.g();
        block_fidelity(
            1.0 - 2.0 * g,
            g,
            0.5 * self.x,
            (h.delta_plus() * omega).cos(),
        )
    }

    pub fn nested_form(&self, omega: f64, h: &LocalHamiltonian) -> NestedRootForm {
        let (g, x) = (self.g(), self.x);
        let c = (h.delta_plus() * omega).cos();
        NestedRootForm {
            a: 1.0 - 2.0 * g,
            b: 4.0 * g * g + x * x * c,
            c: x * x * (1.0 + c) * (8.0 * g * g + x * x * (c - 1.0)),
            c_printed: x * x * (c - 1.0) * (8.0 * g * g + x * x * (c - 1.0)),
        }
    }

    /// `E = δ_B + gΔ⁻`, `ΔE = √(g(δ_A² + δ_B²) - g²(Δ⁻)²)`.
    pub fn energy_analytic(&self, h: &LocalHamiltonian) -> Result<(f64, f64), FamilyError> {
        let g = self.g();
        let dm = h.delta_minus();
        let e = h.delta_b() + g * dm;
        let var = g * (h.delta_a().powi(2) + h.delta_b().powi(2)) - g * g * dm * dm;
        Ok((e, checked_sqrt(var)?))
    }

    /// `π/Δ⁺`; MEMS with `x = 0` are diagonal and never move.
    pub fn omega_min(&self, h: &LocalHamiltonian) -> Result<f64, FamilyError> {
        if self.x == 0.0 {
            return Err(FamilyError::Stationary);
        }
        Ok(PI / h.delta_plus())
    }
}

/// IH state with ordered spectrum `p1 ≥ p2 ≥ p3 ≥ p4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IhState {
    p: [f64; 4],
}

impl IhState {
    pub fn new(p: [f64; 4]) -> Result<Self, FamilyError> {
        if p.iter().any(|v| !v.is_finite()) || p[3] < 0.0 || p.windows(2).any(|w| w[0] < w[1]) {
            return Err(FamilyError::UnorderedEigenvalues(p));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > SPECTRUM_TOL {
            return Err(FamilyError::OutOfDomain(format!(
                "IH spectrum sums to {total}"
            )));
        }
        Ok(Self { p })
    }

    pub fn spectrum(&self) -> [f64; 4] {
        self.p
    }

    /// `diag(p2, ·, ·, p4)` with the middle block
    /// `[[(p1+p3)/2, (p3-p1)/2], [(p3-p1)/2, (p1+p3)/2]]`.
    pub fn density(&self) -> DensityMatrix2Q {
        let [p1, p2, p3, p4] = self.p;
        let (m, o) = (0.5 * (p1 + p3), 0.5 * (p3 - p1));
        let rho = real_matrix([
            [p2, 0.0, 0.0, 0.0],
            [0.0, m, o, 0.0],
            [0.0, o, m, 0.0],
            [0.0, 0.0, 0.0, p4],
        ]);
        DensityMatrix2Q::new_unchecked(rho)
    }

    /// `max(0, p1 - p3 - 2√(p2 p4))`.
    pub fn concurrence(&self) -> f64 {
        let [p1, p2, p3, p4] = self.p;
        (p1 - p3 - 2.0 * (p2 * p4).sqrt()).max(0.0)
    }

    /// `F(ρ, ρ(Ω))`; depends on `Ω` only through `cos(Δ⁻Ω)`.
    pub fn fidelity(&self, omega: f64, h: &LocalHamiltonian) -> Result<f64, FamilyError> {
        let [p1, p2, p3, p4] = self.p;
        block_fidelity(
            p2 + p4,
            0.5 * (p1 + p3),
            0.5 * (p3 - p1),
            (h.delta_minus() * omega).cos(),
        )
    }

    pub fn nested_form(&self, omega: f64, h: &LocalHamiltonian) -> NestedRootForm {
        let [p1, p2, p3, p4] = self.p;
        let c = (h.delta_minus() * omega).cos();
        let printed = (1.0 + c) * ((p1 * p1 + p3 * p3) * (1.0 + c) + 2.0 * p1 * p3 * (3.0 - c));
        NestedRootForm {
            a: p2 + p4,
            b: (p1 + p3).powi(2) + (p1 - p3).powi(2) * c,
            c: (p1 - p3).powi(2) * printed,
            c_printed: printed,
        }
    }

    /// Trace-oracle `(E, ΔE)` next to the closed forms as printed.
    pub fn energy_audit(&self, h: &LocalHamiltonian) -> Result<IhEnergyAudit, FamilyError> {
        let rho = self.density();
        let e = mean_energy(&rho, h);
        let de = energy_spread(&rho, h)?;
        let [p1, _, p3, p4] = self.p;
        let (dp, dm) = (h.delta_plus(), h.delta_minus());
        let lin = p1 * dm + (p3 + 2.0 * p4) * dp;
        let printed_e = 0.5 * lin;
        let radicand = 2.0 * p1 * dp * dm + 2.0 * (p3 + 2.0 * p4) * dp * dp - lin * lin;
        let printed_de = (radicand >= 0.0).then(|| 0.5 * radicand.sqrt());
        Ok(IhEnergyAudit {
            energy: e,
            spread: de,
            printed_energy: printed_e,
            printed_spread: printed_de,
            energy_difference: e - printed_e,
            spread_difference: printed_de.map(|p| de - p),
        })
    }

    /// `π/|Δ⁻|`.
    pub fn omega_min(&self, h: &LocalHamiltonian) -> Result<f64, FamilyError> {
        let dm = h.delta_minus().abs();
        if dm == 0.0 || self.p[0] == self.p[2] {
            return Err(FamilyError::Stationary);
        }
        Ok(PI / dm)
    }
}

/// Uniform spectrum on the simplex, sorted in decreasing order.
pub fn sample_ih<R: Rng + ?Sized>(rng: &mut R) -> IhState {
    let mut p: [f64; 4] = sample_simplex(4, rng)
        .lambdas()
        .try_into()
        .expect("four weights");
    p.sort_by(|a, b| b.total_cmp(a));
    IhState { p }
}

/// Coefficients of `(A + ½(√(B + √C) + √(B - √C)))²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NestedRootForm {
    pub a: f64,
    pub b: f64,
    /// `C` consistent with the block form.
    pub c: f64,
    /// `C` as printed.
    pub c_printed: f64,
}

impl NestedRootForm {
    fn evaluate_with(&self, c: f64) -> Result<f64, FamilyError> {
        let rc = checked_sqrt(c)?;
        let s = checked_sqrt(self.b + rc)? + checked_sqrt(self.b - rc)?;
        Ok((self.a + 0.5 * s).powi(2))
    }

    pub fn evaluate(&self) -> Result<f64, FamilyError> {
        self.evaluate_with(self.c)
    }

    /// The printed coefficients; radicands are not clamped, so the result
    /// may be `NaN` where the printed `C` is negative.
    pub fn evaluate_printed(&self) -> f64 {
        let rc = self.c_printed.sqrt();
        (self.a + 0.5 * ((self.b + rc).sqrt() + (self.b - rc).sqrt())).powi(2)
    }
}

/// IH energy moments from the trace of `ρH` and `ρH²`, compared with the
/// printed closed forms. The energy difference equals `p1 δ_B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IhEnergyAudit {
    pub energy: f64,
    pub spread: f64,
    pub printed_energy: f64,
    /// `None` where the printed radicand is negative.
    pub printed_spread: Option<f64>,
    pub energy_difference: f64,
    pub spread_difference: Option<f64>,
}

/// A family member at its first minimum, with the speed-limit bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyRatio {
    pub concurrence: f64,
    pub omega_min: f64,
    pub f_min: f64,
    pub energy: f64,
    pub spread: f64,
    pub bound: QslBound,
    pub ratio: f64,
}

fn family_ratio(
    concurrence: f64,
    omega_min: f64,
    f_min: f64,
    (energy, spread): (f64, f64),
    table: &AlphaTable,
) -> Result<FamilyRatio, FamilyError> {
    let bound = qsl_time(energy, spread, f_min, table)?;
    Ok(FamilyRatio {
        concurrence,
        omega_min,
        f_min,
        energy,
        spread,
        bound,
        ratio: omega_min / bound.t_bound,
    })
}

/// `τ/T` for `ρ_MEMS(x)` at `Ω = π/Δ⁺`. The spread branch is expected to
/// bound; the max over both branches is used regardless.
pub fn mems_speed_ratio(
    x: f64,
    h: &LocalHamiltonian,
    table: &AlphaTable,
) -> Result<FamilyRatio, FamilyError> {
    let mems = MemsState::new(x)?;
    let omega = mems.omega_min(h)?;
    let moments = mems.energy_analytic(h)?;
    let r = family_ratio(x, omega, mems.fidelity(omega, h)?, moments, table)?;
    if r.bound.branch == Branch::EnergyBranch {
        log::info!(
            "MEMS x = {x}: energy branch bounds (E = {}, ΔE = {})",
            r.energy,
            r.spread
        );
    }
    Ok(r)
}

/// `τ/T` for an IH state at `Ω = π/|Δ⁻|`, energies from the trace oracle.
pub fn ih_speed_ratio(
    ih: &IhState,
    h: &LocalHamiltonian,
    table: &AlphaTable,
) -> Result<FamilyRatio, FamilyError> {
    let omega = ih.omega_min(h)?;
    let rho = ih.density();
    let moments = (mean_energy(&rho, h), energy_spread(&rho, h)?);
    family_ratio(
        ih.concurrence(),
        omega,
        ih.fidelity(omega, h)?,
        moments,
        table,
    )
}
