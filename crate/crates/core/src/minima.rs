//! First fidelity minimum of an evolution, and the analytic pure-state
//! families that reach a prescribed minimum as fast as possible.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::LocalHamiltonian;
use crate::fidelity::{
    fidelity_pure_hi_closed, omega_min_pure_hi, FidelityCurve, PureCurve, UhlmannCurve,
};
use crate::qsl::{beta, AlphaTable, QslError};
use crate::search::{bisect, golden_section, illinois};
use crate::states::{DensityMatrix2Q, PureState2Q, StateError};

/// Longest evolution window ever scanned.
pub const MAX_SCAN_WINDOW: f64 = 64.0 * PI;
/// Fidelity differences at or below this count as flat.
pub const NOISE_GUARD: f64 = 1e-13;
/// Analytic and numeric minima further apart than this are logged.
const CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinimaError {
    #[error("fidelity has no local minimum within the scan window")]
    NoMinimumFound,
    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Qsl(#[from] QslError),
}

/// Scan resolution and refinement tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct ScanOptions {
    pub scan_step: f64,
    pub refine_tol: f64,
    pub max_refine_iter: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            scan_step: PI / 200.0,
            refine_tol: 1e-10,
            max_refine_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinimumMethod {
    AnalyticHI,
    NumericScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstMinimum {
    pub omega: f64,
    pub f_min: f64,
    pub method: MinimumMethod,
}

/// Scan window for `H`: one recurrence period, or [`MAX_SCAN_WINDOW`] if the
/// period is longer or the splittings are incommensurate.
pub fn scan_window(h: &LocalHamiltonian) -> f64 {
    h.period()
        .map_or(MAX_SCAN_WINDOW, |p| p.min(MAX_SCAN_WINDOW))
}

/// Smallest `Ω > 0` where `curve` has a strict local minimum in `(0, window]`.
///
/// A uniform scan finds the first descent followed by an ascent (differences
/// within [`NOISE_GUARD`] are walked through as plateaus); the bracket is
/// then refined as a root of `F'`.
pub fn scan_first_minimum(
    curve: &dyn FidelityCurve,
    window: f64,
    opts: &ScanOptions,
) -> Result<FirstMinimum, MinimaError> {
    if !(opts.scan_step > 0.0 && opts.refine_tol > 0.0 && window > 0.0) {
        return Err(MinimaError::OutOfDomain(format!(
            "scan step {}, refine tolerance {}, window {window}",
            opts.scan_step, opts.refine_tol
        )));
    }
    let n = (window / opts.scan_step).ceil() as usize;
    let omega_at = |k: usize| (k as f64 * opts.scan_step).min(window);
    let mut prev = curve.fidelity_at(0.0)?;
    let mut descending = false;
    // first scan index of the current lowest level
    let mut low_start = 0;
    for k in 1..=n {
        let f = curve.fidelity_at(omega_at(k))?;
        let d = f - prev;
        if d < -NOISE_GUARD {
            descending = true;
            low_start = k;
        } else if d > NOISE_GUARD && descending {
            let lo = omega_at(low_start.saturating_sub(1));
            return refine(curve, lo, omega_at(k), opts);
        }
        prev = f;
    }
    Err(MinimaError::NoMinimumFound)
}

/// Step of the five-point derivative used when a curve has no closed-form `F'`.
const DERIVATIVE_STEP: f64 = 1e-3;

/// `F'` from the curve if available, otherwise the five-point stencil
/// `(8(F(w+h) - F(w-h)) - (F(w+2h) - F(w-2h))) / 12h`, whose `O(h⁴)` error
/// and `~1e-13` noise keep the located root well inside `1e-8`.
fn slope(curve: &dyn FidelityCurve, w: f64) -> Result<f64, StateError> {
    if let Some(d) = curve.derivative_at(w) {
        return Ok(d);
    }
    let h = DERIVATIVE_STEP;
    let near = curve.fidelity_at(w + h)? - curve.fidelity_at(w - h)?;
    let far = curve.fidelity_at(w + 2.0 * h)? - curve.fidelity_at(w - 2.0 * h)?;
    Ok((8.0 * near - far) / (12.0 * h))
}

/// Locates the minimum inside a descent/ascent bracket as the root of `F'`.
/// Value comparisons alone cannot resolve a minimum better than
/// `√(ε / F'')`; the derivative root can. Falls back to golden-section
/// search if `F'` does not change sign across the bracket.
fn refine(
    curve: &dyn FidelityCurve,
    lo: f64,
    hi: f64,
    opts: &ScanOptions,
) -> Result<FirstMinimum, MinimaError> {
    let root = illinois(
        |w| slope(curve, w),
        lo,
        hi,
        opts.refine_tol,
        opts.max_refine_iter,
    )?;
    let (omega, f_min) = match root {
        Some(w) => (w, curve.fidelity_at(w)?),
        None => {
            let m = golden_section(
                |w| curve.fidelity_at(w),
                lo,
                hi,
                opts.refine_tol,
                opts.max_refine_iter,
            )?;
            (m.x, m.value)
        }
    };
    Ok(FirstMinimum {
        omega,
        f_min,
        method: MinimumMethod::NumericScan,
    })
}

/// First minimum of a pure state. Under `H_I` the closed form is used and
/// checked against the numeric scan; otherwise the scan result is returned.
pub fn first_minimum_pure(
    psi: &PureState2Q,
    h: &LocalHamiltonian,
    opts: &ScanOptions,
) -> Result<FirstMinimum, MinimaError> {
    let curve = PureCurve::new(psi, h);
    let numeric = scan_first_minimum(&curve, scan_window(h), opts);
    if !h.is_h_i() {
        return numeric;
    }
    let omega = omega_min_pure_hi(psi);
    let f_min = fidelity_pure_hi_closed(psi, omega);
    if 1.0 - f_min <= NOISE_GUARD {
        return Err(MinimaError::NoMinimumFound);
    }
    match numeric {
        Ok(m) if (m.omega - omega).abs() > CROSS_CHECK_TOL => log::warn!(
            "analytic first minimum {omega} disagrees with scan {} for {psi:?}",
            m.omega
        ),
        Err(e) => log::warn!("scan found no minimum ({e}) where the closed form gives {omega}"),
        Ok(_) => {}
    }
    Ok(FirstMinimum {
        omega,
        f_min,
        method: MinimumMethod::AnalyticHI,
    })
}

/// First minimum of the Uhlmann fidelity `F(ρ, ρ(Ω))`.
pub fn first_minimum_mixed(
    rho: &DensityMatrix2Q,
    h: &LocalHamiltonian,
    opts: &ScanOptions,
) -> Result<FirstMinimum, MinimaError> {
    let curve = UhlmannCurve::new(rho, h)?;
    scan_first_minimum(&curve, scan_window(h), opts)
}

/// First `Ω` in `(0, omega_min]` with `F(Ω) = target`. `F` is nonincreasing
/// up to its first minimum, so the root on `[0, omega_min]` is unique.
pub fn crossing_time(
    curve: &dyn FidelityCurve,
    target: f64,
    first: &FirstMinimum,
    tol: f64,
) -> Result<f64, MinimaError> {
    if !(first.f_min..1.0).contains(&target) {
        return Err(MinimaError::OutOfDomain(format!(
            "target fidelity {target} outside [{}, 1)",
            first.f_min
        )));
    }
    let g = |w| curve.fidelity_at(w).map(|f| f - target);
    match illinois(g, 0.0, first.omega, tol, 200)? {
        Some(w) => Ok(w),
        // only reachable if the curve does not match `first`
        None => Ok(bisect(g, 0.0, first.omega, tol, 200)?),
    }
}

/// `(Ω, δ)` for the pure states that become orthogonal at time `Ω` under `H_I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalFamilyPoint {
    omega: f64,
    delta: f64,
}

impl OrthogonalFamilyPoint {
    pub fn new(omega: f64, delta: f64) -> Result<Self, MinimaError> {
        if !(FRAC_PI_2..=PI).contains(&omega) || !(0.0..=1.0).contains(&delta) {
            return Err(MinimaError::OutOfDomain(format!(
                "orthogonal family needs Ω in [π/2, π] and δ in [0, 1], got ({omega}, {delta})"
            )));
        }
        Ok(Self { omega, delta })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `Γ = 1 / (2 (1 - cos Ω))`.
    pub fn gamma(&self) -> f64 {
        0.5 / (1.0 - self.omega.cos())
    }
}

/// Real amplitudes `|c0|² = |c3|² = Γ`, `|c1|² = -2δΓ cos Ω`,
/// `|c2|² = -2(1-δ)Γ cos Ω`, with an optional relative phase `φ` on `c3`.
/// The phase changes the concurrence but not the fidelity curve.
pub fn orthogonal_family_state(p: &OrthogonalFamilyPoint, phase: f64) -> PureState2Q {
    let g = p.gamma();
    // cos Ω ≤ 0 on the domain; max() absorbs the round-off at Ω = π/2
    let mid = (-2.0 * g * p.omega.cos()).max(0.0);
    let amps = [
        g.sqrt().into(),
        (p.delta * mid).sqrt().into(),
        ((1.0 - p.delta) * mid).sqrt().into(),
        num_complex::Complex64::from_polar(g.sqrt(), phase),
    ];
    PureState2Q::normalized(amps).expect("family amplitudes are nonzero")
}

fn check_f_min(f_min: f64) -> Result<(), MinimaError> {
    if !(0.0..=1.0).contains(&f_min) {
        return Err(MinimaError::OutOfDomain(format!(
            "F_min {f_min} outside [0, 1]"
        )));
    }
    Ok(())
}

/// The state reaching `F_min` at `Ω = π/2` under `H_I` with real amplitudes
/// on `|00⟩` and `|11⟩`: `|c0|² = (1 + √F)/2`, `|c3|² = (1 - √F)/2`.
pub fn fast_state(f_min: f64) -> Result<PureState2Q, MinimaError> {
    check_f_min(f_min)?;
    let r = f_min.sqrt();
    Ok(PureState2Q::from_real([
        (0.5 * (1.0 + r)).sqrt(),
        0.0,
        0.0,
        (0.5 * (1.0 - r)).sqrt(),
    ])?)
}

/// `τ/T` along the two fast-state branches at `Ω = π/2`:
/// `(1 - √F)/α(F)` (energy) and `√(1 - F)/β(F)` (spread).
pub fn fast_state_ratios(f_min: f64, table: &AlphaTable) -> Result<(f64, f64), MinimaError> {
    check_f_min(f_min)?;
    if f_min == 1.0 {
        return Err(MinimaError::OutOfDomain(
            "ratios are 0/0 at F_min = 1".into(),
        ));
    }
    let p1 = (1.0 - f_min.sqrt()) / table.alpha(f_min)?;
    let p2 = (1.0 - f_min).sqrt() / beta(f_min)?;
    Ok((p1, p2))
}

/// Limits of [`fast_state_ratios`] as `F_min → 1`.
///
/// With `ε = 1 - F` the energy branch becomes `π / (2 min_v arccos(1-v)/v)`
/// and the spread branch `π/2`.
pub fn fast_state_ratio_limits() -> (f64, f64) {
    let m = golden_section(
        |v: f64| Ok::<_, std::convert::Infallible>((1.0 - v).acos() / v),
        1e-3,
        2.0,
        1e-12,
        200,
    )
    .unwrap_or_else(|e| match e {});
    (PI / (2.0 * m.value), FRAC_PI_2)
}
