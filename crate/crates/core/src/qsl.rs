//! Quantum speed limit `T = max(α(F) π/(2E), β(F) π/(2ΔE))`.
//!
//! `β(F) = (2/π) arccos √F` is closed form. `α(F)` has no closed form; it
//! is the smallest `E·t` (in units of π/2) needed by the states that
//! saturate the energy-based bound, which are two-level states with
//! populations `q` and `1 - q` on levels `0` and `e`:
//!
//! ```text
//! α(F) = (2/π) min_q (1 - q) θ(q, F),   θ = arccos(1 - (1 - F) / (2q(1 - q)))
//! ```
//!
//! over the feasible range `4q(1 - q) ≥ 1 - F`. [`AlphaTable`] tabulates it
//! once and interpolates with a monotone cubic.

use std::f64::consts::{FRAC_2_PI, PI};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::search::golden_section;

/// Fidelity arguments within this distance outside `[0, 1]` are clamped.
pub const FIDELITY_RANGE_TOL: f64 = 1e-12;
pub const DEFAULT_ALPHA_GRID: usize = 2001;
pub const MIN_ALPHA_GRID: usize = 101;

const ALPHA_SCAN_POINTS: usize = 400;
const ALPHA_Q_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QslError {
    #[error("fidelity {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("alpha table needs at least {MIN_ALPHA_GRID} points, got {0}")]
    GridTooSmall(usize),
    #[error("energy moments must be finite and nonnegative (E = {0}, ΔE = {1})")]
    InvalidEnergy(f64, f64),
    #[error("E = ΔE = 0: a stationary state cannot reach fidelity {0}")]
    BothDegenerate(f64),
}

fn check_fidelity(f: f64) -> Result<f64, QslError> {
    if !(-FIDELITY_RANGE_TOL..=1.0 + FIDELITY_RANGE_TOL).contains(&f) {
        return Err(QslError::OutOfRange(f));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `β(F) = (2/π) arccos √F`.
pub fn beta(f: f64) -> Result<f64, QslError> {
    let f = check_fidelity(f)?;
    Ok(FRAC_2_PI * f.sqrt().acos())
}

/// `(1 - q) θ(q, F)`: the scaled time-energy product of a two-level state.
fn two_level_action(q: f64, f: f64) -> f64 {
    let arg = 1.0 - (1.0 - f) / (2.0 * q * (1.0 - q));
    (1.0 - q) * arg.clamp(-1.0, 1.0).acos()
}

/// `α(F)` by direct minimization (dense scan + golden-section refinement).
pub fn alpha_direct(f: f64) -> Result<f64, QslError> {
    let f = check_fidelity(f)?;
    if f == 0.0 {
        return Ok(1.0);
    }
    if f == 1.0 {
        return Ok(0.0);
    }
    let root = f.sqrt();
    let q_lo = 0.5 * (1.0 - root);
    let q_hi = 0.5 * (1.0 + root);
    let step = (q_hi - q_lo) / ALPHA_SCAN_POINTS as f64;
    let (best_k, _) = (0..=ALPHA_SCAN_POINTS)
        .map(|k| (k, two_level_action(q_lo + k as f64 * step, f)))
        .fold(
            (0, f64::INFINITY),
            |acc, (k, v)| if v < acc.1 { (k, v) } else { acc },
        );
    let a = q_lo + best_k.saturating_sub(1) as f64 * step;
    let b = (q_lo + (best_k + 1) as f64 * step).min(q_hi);
    let m = golden_section(
        |q| Ok::<_, std::convert::Infallible>(two_level_action(q, f)),
        a,
        b,
        ALPHA_Q_TOL,
        200,
    )
    .unwrap_or_else(|e| match e {});
    Ok((FRAC_2_PI * m.value).clamp(0.0, 1.0))
}

/// Tabulated `α(F)` with monotone piecewise-cubic interpolation.
///
/// Nodes are uniform in `s = √F` (both endpoint behaviours are smooth in
/// `s`) and squeezed towards `F = 1` by `s = sin(πu/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaTable {
    pub f_grid: Vec<f64>,
    pub alpha_values: Vec<f64>,
    #[serde(skip)]
    s_grid: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl AlphaTable {
    pub fn build(grid_size: usize) -> Result<Self, QslError> {
        if grid_size < MIN_ALPHA_GRID {
            return Err(QslError::GridTooSmall(grid_size));
        }
        let last = (grid_size - 1) as f64;
        let s_grid: Vec<f64> = (0..grid_size)
            .map(|i| match i {
                0 => 0.0,
                _ if i == grid_size - 1 => 1.0,
                _ => (0.5 * PI * i as f64 / last).sin(),
            })
            .collect();
        let f_grid: Vec<f64> = s_grid.iter().map(|s| s * s).collect();
        let alpha_values = f_grid
            .iter()
            .map(|&f| alpha_direct(f))
            .collect::<Result<Vec<_>, _>>()?;
        let slopes = pchip_slopes(&s_grid, &alpha_values);
        Ok(Self {
            f_grid,
            alpha_values,
            s_grid,
            slopes,
        })
    }

    /// Process-wide table at the default resolution.
    pub fn shared() -> &'static AlphaTable {
        static TABLE: OnceLock<AlphaTable> = OnceLock::new();
        TABLE.get_or_init(|| AlphaTable::build(DEFAULT_ALPHA_GRID).expect("default grid is valid"))
    }

    pub fn len(&self) -> usize {
        self.f_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f_grid.is_empty()
    }

    /// Interpolated `α(F)`; exact at grid nodes.
    pub fn alpha(&self, f: f64) -> Result<f64, QslError> {
        let f = check_fidelity(f)?;
        let s = f.sqrt();
        let n = self.s_grid.len();
        let k = match self.s_grid.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(i) => return Ok(self.alpha_values[i]),
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let (x0, x1) = (self.s_grid[k], self.s_grid[k + 1]);
        let (y0, y1) = (self.alpha_values[k], self.alpha_values[k + 1]);
        let (d0, d1) = (self.slopes[k], self.slopes[k + 1]);
        let h = x1 - x0;
        let t = (s - x0) / h;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        Ok(h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1)
    }

    /// `(F, α(F), β(F))` rows at the table nodes.
    pub fn rows(&self) -> Vec<(f64, f64, f64)> {
        self.f_grid
            .iter()
            .zip(&self.alpha_values)
            .map(|(&f, &a)| (f, a, beta(f).expect("grid inside [0, 1]")))
            .collect()
    }
}

/// Fritsch–Butland derivative estimates (the PCHIP scheme): weighted
/// harmonic means of adjacent secants, zero at local extrema.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = pchip_end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// One-sided three-point end slope, limited to preserve monotonicity.
fn pchip_end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

/// Which argument of the max achieves the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum Branch {
    /// `α(F) π / (2E)`.
    EnergyBranch,
    /// `β(F) π / (2ΔE)`.
    SpreadBranch,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::EnergyBranch => "energy",
            Branch::SpreadBranch => "spread",
        }
    }
}

/// Both branch times and their maximum. Times are in units of ħ/ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QslBound {
    pub t_energy: f64,
    pub t_spread: f64,
    pub t_bound: f64,
    pub branch: Branch,
}

fn branch_time(coeff: f64, moment: f64) -> f64 {
    if coeff == 0.0 {
        0.0
    } else if moment == 0.0 {
        f64::INFINITY
    } else {
        coeff * PI / (2.0 * moment)
    }
}

/// Lower bound on the time to reach fidelity `F` for a state with mean
/// energy `E` (above the ground level) and spread `ΔE`. Ties go to the
/// spread branch.
pub fn qsl_time(e: f64, de: f64, f: f64, table: &AlphaTable) -> Result<QslBound, QslError> {
    if !(e.is_finite() && de.is_finite() && e >= 0.0 && de >= 0.0) {
        return Err(QslError::InvalidEnergy(e, de));
    }
    let f = check_fidelity(f)?;
    let t_energy = branch_time(table.alpha(f)?, e);
    let t_spread = branch_time(beta(f)?, de);
    if t_energy.is_infinite() && t_spread.is_infinite() {
        return Err(QslError::BothDegenerate(f));
    }
    let (t_bound, branch) = if t_spread >= t_energy {
        (t_spread, Branch::SpreadBranch)
    } else {
        (t_energy, Branch::EnergyBranch)
    };
    Ok(QslBound {
        t_energy,
        t_spread,
        t_bound,
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force oracle: fine uniform scan of q, no refinement.
    fn alpha_brute(f: f64) -> f64 {
        let r = f.sqrt();
        let (lo, hi) = (0.5 * (1.0 - r), 0.5 * (1.0 + r));
        let n = 200_000;
        (0..=n)
            .map(|k| two_level_action(lo + (hi - lo) * k as f64 / n as f64, f))
            .fold(f64::INFINITY, f64::min)
            * FRAC_2_PI
    }

    #[test]
    fn beta_anchors() {
        assert_eq!(beta(0.0).unwrap(), 1.0);
        assert_eq!(beta(1.0).unwrap(), 0.0);
        assert!((beta(0.25).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(beta(-1e-13).unwrap(), 1.0);
        assert!(matches!(beta(1.1), Err(QslError::OutOfRange(_))));
    }

    #[test]
    fn alpha_direct_matches_brute_force() {
        for f in [0.01, 0.1, 0.35, 0.5, 0.8, 0.99] {
            let a = alpha_direct(f).unwrap();
            let b = alpha_brute(f);
            // the scan can only overestimate a minimum
            assert!(a <= b + 1e-14, "F={f}: {a} > {b}");
            assert!(b - a < 1e-8, "F={f}: {a} vs {b}");
        }
    }

    #[test]
    fn alpha_at_fast_state_fidelity() {
        // frozen from the brute-force scan above
        let a = alpha_direct(0.35).unwrap();
        assert!((a - 0.374_363_91).abs() < 1e-7, "{a}");
        let ratio = (1.0 - 0.35f64.sqrt()) / a;
        assert!((ratio - 1.091).abs() < 5e-3);
    }

    #[test]
    fn table_invariants() {
        let t = AlphaTable::build(DEFAULT_ALPHA_GRID).unwrap();
        assert_eq!(t.alpha_values[0], 1.0);
        assert_eq!(*t.alpha_values.last().unwrap(), 0.0);
        assert_eq!(t.f_grid[0], 0.0);
        assert_eq!(*t.f_grid.last().unwrap(), 1.0);
        assert!(t.alpha_values.windows(2).all(|w| w[1] < w[0]));
        for (f, a, b) in t.rows() {
            assert!(a <= b + 1e-15, "alpha > beta at F={f}");
        }
        assert!(matches!(
            AlphaTable::build(50),
            Err(QslError::GridTooSmall(50))
        ));
    }

    #[test]
    fn interpolation_is_node_exact_and_accurate() {
        let t = AlphaTable::shared();
        for i in (0..t.len()).step_by(97) {
            assert_eq!(t.alpha(t.f_grid[i]).unwrap(), t.alpha_values[i]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let f: f64 = rng.random_range(0.0..1.0);
            let err = (t.alpha(f).unwrap() - alpha_direct(f).unwrap()).abs();
            assert!(err < 1e-6, "F={f}: err {err}");
        }
        for _ in 0..1000 {
            let f: f64 = rng.random_range(0.0..1.0);
            assert!(t.alpha(f).unwrap() <= beta(f).unwrap());
        }
    }

    #[test]
    fn qsl_time_cases() {
        let t = AlphaTable::shared();
        let f: f64 = 0.35;
        let b = qsl_time(1.0 - f.sqrt(), (1.0 - f).sqrt(), f, t).unwrap();
        let tau = PI / 2.0;
        assert!((tau / b.t_energy - 1.091).abs() < 5e-3);
        assert!((tau / b.t_spread - 1.351).abs() < 5e-3);
        assert_eq!(b.branch, Branch::EnergyBranch);
        assert_eq!(b.t_bound, b.t_energy);

        let one = qsl_time(0.7, 0.3, 1.0, t).unwrap();
        assert_eq!((one.t_energy, one.t_spread), (0.0, 0.0));

        // maximally entangled H_I state reaching orthogonality at π/2: E = ΔE = 1
        let bell = qsl_time(1.0, 1.0, 0.0, t).unwrap();
        assert!((PI / 2.0 / bell.t_bound - 1.0).abs() < 1e-15);
        assert_eq!(bell.branch, Branch::SpreadBranch);

        assert!(matches!(
            qsl_time(0.0, 0.0, 0.5, t),
            Err(QslError::BothDegenerate(_))
        ));
        let only_spread = qsl_time(0.0, 0.5, 0.5, t).unwrap();
        assert!(only_spread.t_energy.is_infinite());
        assert_eq!(only_spread.branch, Branch::EnergyBranch);
    }

    #[test]
    fn doubling_energies_halves_times() {
        let t = AlphaTable::shared();
        let a = qsl_time(0.8, 0.6, 0.4, t).unwrap();
        let b = qsl_time(1.6, 1.2, 0.4, t).unwrap();
        assert_eq!(a.t_energy, 2.0 * b.t_energy);
        assert_eq!(a.t_spread, 2.0 * b.t_spread);
    }
}
