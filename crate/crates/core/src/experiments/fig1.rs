//! Pure states under `H_I`: the orthogonal-family sweep and the random
//! cloud restricted to a first-minimum window.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::{par_map_streams, Cell, ExperimentError, FidelityKind, QslRecord, Table};
use crate::dynamics::{energy_spread, mean_energy, LocalHamiltonian};
use crate::minima::{
    first_minimum_pure, orthogonal_family_state, MinimaError, OrthogonalFamilyPoint, ScanOptions,
};
use crate::qsl::{qsl_time, AlphaTable, Branch, QslBound};
use crate::sampling::sample_pure_state;
use crate::states::{concurrence_pure, PureState2Q};

/// Concurrence at or below this counts as separable.
pub const SEPARABLE_TOL: f64 = 1e-9;
/// Slack on the `C ≤ √(1 - F_min)` boundary check.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Fewest accepted pure states a cloud may hold.
pub const MIN_ACCEPTED: usize = 1000;

/// Ratio of a pure state at its first minimum under `h`.
fn pure_record(
    psi: &PureState2Q,
    h: &LocalHamiltonian,
    opts: &ScanOptions,
    table: &AlphaTable,
) -> Result<(QslRecord, QslBound), ExperimentError> {
    let m = first_minimum_pure(psi, h, opts)?;
    let bound = qsl_time(mean_energy(psi, h), energy_spread(psi, h)?, m.f_min, table)?;
    let c = concurrence_pure(psi);
    let rec = QslRecord::new(c, m.f_min, FidelityKind::FirstMinimum, m.omega, &bound)?;
    Ok((rec, bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1aParams {
    pub n_omega: usize,
    pub n_delta: usize,
    pub n_phase: usize,
    pub c_bins: usize,
}

impl Default for Fig1aParams {
    fn default() -> Self {
        Self {
            n_omega: 101,
            n_delta: 11,
            n_phase: 11,
            c_bins: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1aPoint {
    pub omega: f64,
    pub delta: f64,
    pub phase: f64,
    pub record: QslRecord,
}

/// Extremal ratios of the points falling in `[c_lo, c_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRange {
    pub c_lo: f64,
    pub c_hi: f64,
    pub count: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

impl RatioRange {
    fn empty(c_lo: f64, c_hi: f64) -> Self {
        Self {
            c_lo,
            c_hi,
            count: 0,
            ratio_min: f64::INFINITY,
            ratio_max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, ratio: f64) {
        self.count += 1;
        self.ratio_min = self.ratio_min.min(ratio);
        self.ratio_max = self.ratio_max.max(ratio);
    }

    fn row(&self) -> Vec<Cell> {
        vec![
            self.c_lo.into(),
            self.c_hi.into(),
            self.count.into(),
            self.ratio_min.into(),
            self.ratio_max.into(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig1aResult {
    pub points: Vec<Fig1aPoint>,
    /// Populated concurrence bins of width `1 / c_bins`.
    pub bins: Vec<RatioRange>,
    /// Points with `C ≤ SEPARABLE_TOL`.
    pub separable: RatioRange,
}

impl Fig1aResult {
    pub const COLUMNS: [&'static str; 5] =
        ["c_bin_lo", "c_bin_hi", "count", "ratio_min", "ratio_max"];

    /// The separable row first (`c_bin_lo = c_bin_hi = 0`), then the bins.
    pub fn table(&self) -> Table {
        let mut t = Table::new(&Self::COLUMNS);
        if self.separable.count > 0 {
            t.push(self.separable.row());
        }
        self.bins.iter().for_each(|b| t.push(b.row()));
        t
    }
}

/// Sweeps the orthogonal family over `Ω ∈ [π/2, π]`, `δ ∈ [0, 1]` and a
/// relative phase `φ ∈ [0, 2π)` on `c3`. Without the phase the family only
/// covers the concurrences reachable with real amplitudes.
pub fn run_fig1a(params: &Fig1aParams, table: &AlphaTable) -> Result<Fig1aResult, ExperimentError> {
    let Fig1aParams {
        n_omega,
        n_delta,
        n_phase,
        c_bins,
    } = *params;
    if n_omega < 2 || n_delta < 2 || n_phase < 1 || c_bins < 1 {
        return Err(ExperimentError::InvalidParameter(format!(
            "fig1a grid needs n_omega, n_delta ≥ 2 and n_phase, c_bins ≥ 1, got {params:?}"
        )));
    }
    let h = LocalHamiltonian::h_i();
    let opts = ScanOptions::default();
    let lin = |k: usize, n: usize, a: f64, b: f64| a + (b - a) * k as f64 / (n - 1) as f64;

    let mut points = Vec::with_capacity(n_omega * n_delta * n_phase);
    for i in 0..n_omega {
        // the last node is exactly π so the separable point is on the grid
        let omega = if i + 1 == n_omega {
            PI
        } else {
            lin(i, n_omega, FRAC_PI_2, PI)
        };
        for j in 0..n_delta {
            let delta = lin(j, n_delta, 0.0, 1.0);
            let p = OrthogonalFamilyPoint::new(omega, delta)?;
            for k in 0..n_phase {
                let phase = 2.0 * PI * k as f64 / n_phase as f64;
                let psi = orthogonal_family_state(&p, phase);
                let (record, _) = pure_record(&psi, &h, &opts, table)?;
                points.push(Fig1aPoint {
                    omega,
                    delta,
                    phase,
                    record,
                });
            }
        }
    }

    let width = 1.0 / c_bins as f64;
    let mut bins: Vec<RatioRange> = (0..c_bins)
        .map(|k| RatioRange::empty(k as f64 * width, (k + 1) as f64 * width))
        .collect();
    let mut separable = RatioRange::empty(0.0, 0.0);
    for p in &points {
        let c = p.record.concurrence;
        let k = ((c / width) as usize).min(c_bins - 1);
        bins[k].push(p.record.ratio);
        if c <= SEPARABLE_TOL {
            separable.push(p.record.ratio);
        }
    }
    bins.retain(|b| b.count > 0);
    Ok(Fig1aResult {
        points,
        bins,
        separable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1bParams {
    pub seed: u64,
    pub samples: u64,
    pub f_window: (f64, f64),
    pub scan: ScanOptions,
}

impl Default for Fig1bParams {
    fn default() -> Self {
        Self {
            seed: 1,
            samples: 1_000_000,
            f_window: (0.35, 0.4),
            scan: ScanOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1bRecord {
    pub stream_index: u64,
    pub record: QslRecord,
    pub t_energy: f64,
    pub t_spread: f64,
    /// `2 |c0 c3|`, the part of the concurrence carried by `|00⟩, |11⟩`.
    pub outer_coherence: f64,
}

impl Fig1bRecord {
    /// Excess of `C` over `√(1 - F_min)`.
    pub fn boundary_excess(&self) -> f64 {
        self.record.concurrence - (1.0 - self.record.fidelity).sqrt()
    }

    /// Excess of `2 |c0 c3|` over `√(1 - F_min)`.
    pub fn outer_boundary_excess(&self) -> f64 {
        self.outer_coherence - (1.0 - self.record.fidelity).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig1bResult {
    pub raw_samples: u64,
    /// Draws without a first minimum (stationary up to noise).
    pub stationary: u64,
    pub records: Vec<Fig1bRecord>,
    pub fastest_energy: Option<Fig1bRecord>,
    pub fastest_spread: Option<Fig1bRecord>,
}

impl Fig1bResult {
    pub const COLUMNS: [&'static str; 7] = [
        "concurrence",
        "f_min",
        "tau",
        "t_energy",
        "t_spread",
        "ratio",
        "branch",
    ];

    /// Accepted states with `C > √(1 - F_min) + BOUNDARY_TOL`.
    pub fn boundary_violations(&self) -> Vec<&Fig1bRecord> {
        self.records
            .iter()
            .filter(|r| r.boundary_excess() > BOUNDARY_TOL)
            .collect()
    }

    /// Same check with `2 |c0 c3|` in place of `C`.
    pub fn outer_boundary_violations(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.outer_boundary_excess() > BOUNDARY_TOL)
            .count()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&Self::COLUMNS);
        for r in &self.records {
            let q = &r.record;
            t.push(vec![
                q.concurrence.into(),
                q.fidelity.into(),
                q.tau.into(),
                r.t_energy.into(),
                r.t_spread.into(),
                q.ratio.into(),
                q.branch.label().into(),
            ]);
        }
        t
    }
}

/// Rejection-samples Fubini–Study pure states by their first-minimum depth
/// under `H_I` and keeps those with `F_min` in `f_window`.
pub fn run_fig1b(params: &Fig1bParams, table: &AlphaTable) -> Result<Fig1bResult, ExperimentError> {
    let (lo, hi) = params.f_window;
    if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
        return Err(ExperimentError::InvalidParameter(format!(
            "F_min window [{lo}, {hi}] is not inside [0, 1]"
        )));
    }
    let h = LocalHamiltonian::h_i();
    let outcomes = par_map_streams(params.seed, 0, params.samples, "fig1b", |i, rng| {
        let psi = sample_pure_state(rng);
        match pure_record(&psi, &h, &params.scan, table) {
            Err(ExperimentError::Minima(MinimaError::NoMinimumFound)) => Ok(None),
            Err(e) => Err(e),
            Ok((rec, _)) if !(lo..=hi).contains(&rec.fidelity) => Ok(Some(None)),
            Ok((record, bound)) => {
                let c = psi.amplitudes();
                Ok(Some(Some(Fig1bRecord {
                    stream_index: i,
                    record,
                    t_energy: bound.t_energy,
                    t_spread: bound.t_spread,
                    outer_coherence: 2.0 * c[0].norm() * c[3].norm(),
                })))
            }
        }
    });

    let mut stationary = 0;
    let mut records = Vec::new();
    for o in outcomes {
        match o? {
            None => stationary += 1,
            Some(Some(r)) => records.push(r),
            Some(None) => {}
        }
    }
    if records.len() < MIN_ACCEPTED {
        return Err(ExperimentError::InsufficientSamples {
            accepted: records.len(),
            required: MIN_ACCEPTED,
        });
    }
    let fastest = |b: Branch| {
        records
            .iter()
            .filter(|r| r.record.branch == b)
            .min_by(|x, y| x.record.ratio.total_cmp(&y.record.ratio))
            .copied()
    };
    Ok(Fig1bResult {
        raw_samples: params.samples,
        stationary,
        fastest_energy: fastest(Branch::EnergyBranch),
        fastest_spread: fastest(Branch::SpreadBranch),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1a_small_grid_has_the_family_extremes() {
        let params = Fig1aParams {
            n_omega: 21,
            n_delta: 5,
            n_phase: 4,
            c_bins: 20,
        };
        let r = run_fig1a(&params, AlphaTable::shared()).unwrap();
        assert_eq!(r.points.len(), 21 * 5 * 4);
        let max = r.points.iter().map(|p| p.record.ratio).fold(0.0, f64::max);
        assert!((max - 2f64.sqrt()).abs() < 1e-6, "{max}");
        assert_eq!(r.separable.count, 1);
        assert!((r.separable.ratio_min - 2f64.sqrt()).abs() < 1e-6);
        let top = r.bins.last().unwrap();
        assert!((top.ratio_min - 1.0).abs() < 1e-6);
        assert_eq!(
            r.bins.iter().map(|b| b.count).sum::<usize>(),
            r.points.len()
        );
        assert_eq!(r.table().len(), r.bins.len() + 1);
    }

    #[test]
    fn fig1b_rejects_bad_window_and_small_runs() {
        let t = AlphaTable::shared();
        let mut p = Fig1bParams {
            samples: 200,
            ..Default::default()
        };
        assert!(matches!(
            run_fig1b(&p, t),
            Err(ExperimentError::InsufficientSamples { .. })
        ));
        p.f_window = (0.5, 0.2);
        assert!(matches!(
            run_fig1b(&p, t),
            Err(ExperimentError::InvalidParameter(_))
        ));
    }

    #[test]
    fn fig1b_accepts_only_the_window() {
        let p = Fig1bParams {
            samples: 40_000,
            ..Default::default()
        };
        let r = run_fig1b(&p, AlphaTable::shared()).unwrap();
        assert!(r.records.len() >= MIN_ACCEPTED);
        for rec in &r.records {
            assert!((0.35..=0.4).contains(&rec.record.fidelity));
            assert!(rec.record.ratio >= 1.0 - 1e-9);
        }
        let e = r.fastest_energy.unwrap().record.ratio;
        let s = r.fastest_spread.unwrap().record.ratio;
        assert!(e > 1.0 && s > 1.0);
        assert_eq!(r.outer_boundary_violations(), 0);
    }
}
