//! Random mixed states under a local Hamiltonian: ratios at fixed fidelity
//! checkpoints and at the first minimum, averaged over concurrence windows.

use serde::Serialize;

use super::{
    par_map_streams, spearman, ExperimentError, FidelityKind, GridSpec, QslRecord, RunningStats,
    Table, WindowStat,
};
use crate::dynamics::{energy_spread, mean_energy, LocalHamiltonian};
use crate::fidelity::UhlmannCurve;
use crate::minima::{crossing_time, scan_first_minimum, scan_window, MinimaError, ScanOptions};
use crate::qsl::{qsl_time, AlphaTable};
use crate::sampling::sample_mixed_state;
use crate::states::concurrence_mixed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig4Params {
    pub seed: u64,
    pub samples: u64,
    pub hamiltonian: LocalHamiltonian,
    pub scan: ScanOptions,
    /// Fixed checkpoints are `1 - k / checkpoint_steps`.
    pub checkpoint_steps: usize,
    pub f_bins: usize,
    pub c_bins: usize,
    pub min_count: usize,
    /// Half-width of the first-minimum slices.
    pub slice_halfwidth: f64,
}

impl Default for Fig4Params {
    fn default() -> Self {
        Self {
            seed: 1,
            samples: 200_000,
            hamiltonian: LocalHamiltonian::h_i(),
            scan: ScanOptions::default(),
            checkpoint_steps: 20,
            f_bins: 20,
            c_bins: 20,
            min_count: 50,
            slice_halfwidth: 0.0125,
        }
    }
}

/// Fixed-checkpoint slices, as checkpoint indices `k` for `F = 1 - k/20`.
const FIXED_SLICES: [usize; 2] = [1, 4];
/// Centers of the first-minimum slices.
const MIN_SLICES: [f64; 2] = [0.925, 0.825];

/// All records of one sampled state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig4State {
    pub stream_index: u64,
    pub first_minimum: QslRecord,
    /// In order of decreasing checkpoint fidelity.
    pub checkpoints: Vec<QslRecord>,
}

/// Mean ratio per concurrence bin along one slice of the `(F, C)` plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig4Slice {
    pub label: String,
    pub kind: FidelityKind,
    pub windows: Vec<WindowStat>,
}

impl Fig4Slice {
    pub fn reliable(&self) -> impl Iterator<Item = &WindowStat> {
        self.windows.iter().filter(|w| w.reliable)
    }

    /// Spearman correlation of bin center against mean ratio over reliable bins.
    pub fn trend(&self) -> f64 {
        let (c, r): (Vec<f64>, Vec<f64>) = self
            .reliable()
            .map(|w| (w.c_center(), w.mean_ratio))
            .unzip();
        spearman(&c, &r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig4Result {
    pub samples: u64,
    /// Draws whose fidelity never dips below the noise guard.
    pub stationary: u64,
    pub states: Vec<Fig4State>,
    pub slices: Vec<Fig4Slice>,
    pub grid: GridSpec,
    /// First-minimum records per `(F_min bin, C bin)` window.
    pub grid_counts: Vec<Vec<usize>>,
}

impl Fig4Result {
    pub const COLUMNS: [&'static str; 7] = [
        "slice",
        "f_kind",
        "c_bin_lo",
        "c_bin_hi",
        "count",
        "mean_ratio",
        "std_ratio",
    ];

    pub fn record_count(&self) -> usize {
        self.states.iter().map(|s| 1 + s.checkpoints.len()).sum()
    }

    pub fn records(&self) -> impl Iterator<Item = &QslRecord> {
        self.states
            .iter()
            .flat_map(|s| std::iter::once(&s.first_minimum).chain(&s.checkpoints))
    }

    /// Reliable windows of every slice.
    pub fn table(&self) -> Table {
        let mut t = Table::new(&Self::COLUMNS);
        for s in &self.slices {
            for w in s.reliable() {
                t.push(vec![
                    s.label.clone().into(),
                    s.kind.label().into(),
                    w.c_lo.into(),
                    w.c_hi.into(),
                    w.count.into(),
                    w.mean_ratio.into(),
                    w.std_ratio.into(),
                ]);
            }
        }
        t
    }
}

fn sample_state(
    i: u64,
    rng: &mut crate::sampling::RandomStream,
    p: &Fig4Params,
    table: &AlphaTable,
) -> Result<Option<Fig4State>, ExperimentError> {
    let h = &p.hamiltonian;
    let rho = sample_mixed_state(rng);
    let c = concurrence_mixed(&rho)?;
    let (e, de) = (mean_energy(&rho, h), energy_spread(&rho, h)?);
    let curve = UhlmannCurve::new(&rho, h)?;
    let first = match scan_first_minimum(&curve, scan_window(h), &p.scan) {
        Ok(m) => m,
        Err(MinimaError::NoMinimumFound) => return Ok(None),
        Err(err) => return Err(err.into()),
    };
    let bound = qsl_time(e, de, first.f_min, table)?;
    let first_minimum = QslRecord::new(
        c,
        first.f_min,
        FidelityKind::FirstMinimum,
        first.omega,
        &bound,
    )?;

    let mut checkpoints = Vec::new();
    for k in 1..p.checkpoint_steps {
        let f = (p.checkpoint_steps - k) as f64 / p.checkpoint_steps as f64;
        if f <= first.f_min {
            break;
        }
        let tau = crossing_time(&curve, f, &first, p.scan.refine_tol)?;
        let bound = qsl_time(e, de, f, table)?;
        checkpoints.push(QslRecord::new(
            c,
            f,
            FidelityKind::FixedCheckpoint,
            tau,
            &bound,
        )?);
    }
    Ok(Some(Fig4State {
        stream_index: i,
        first_minimum,
        checkpoints,
    }))
}

/// Samples `ρ = U D U†` states, records `τ/T` at each checkpoint above the
/// first minimum and at the minimum itself, and averages per concurrence bin
/// for the slices `F = 0.95`, `F = 0.8`, `F_min ≈ 0.925` and `F_min ≈ 0.825`.
pub fn run_fig4(p: &Fig4Params, table: &AlphaTable) -> Result<Fig4Result, ExperimentError> {
    if p.checkpoint_steps < 2 || p.f_bins == 0 || p.c_bins == 0 || p.min_count == 0 {
        return Err(ExperimentError::InvalidParameter(format!(
            "fig4 needs checkpoint_steps ≥ 2 and positive bin counts, got {p:?}"
        )));
    }
    if !p.checkpoint_steps.is_multiple_of(20) {
        return Err(ExperimentError::InvalidParameter(format!(
            "checkpoint_steps {} must be a multiple of 20 so F = 0.95 and 0.8 are checkpoints",
            p.checkpoint_steps
        )));
    }
    let outcomes = par_map_streams(p.seed, 0, p.samples, "fig4", |i, rng| {
        sample_state(i, rng, p, table)
    });

    let mut stationary = 0;
    let mut states = Vec::new();
    for o in outcomes {
        match o? {
            Some(s) => states.push(s),
            None => stationary += 1,
        }
    }

    let grid = GridSpec::uniform(p.f_bins, p.c_bins);
    let mut grid_counts = vec![vec![0usize; p.c_bins]; p.f_bins];
    for s in &states {
        let r = &s.first_minimum;
        if let Some((fi, ci)) = grid.window(r.fidelity, r.concurrence) {
            grid_counts[fi][ci] += 1;
        }
    }

    let mut slices = Vec::new();
    let scale = p.checkpoint_steps / 20;
    for k in FIXED_SLICES {
        let f = 1.0 - k as f64 / 20.0;
        let picked = states
            .iter()
            .filter_map(|s| s.checkpoints.get(k * scale - 1))
            .map(|r| (r.concurrence, r.ratio));
        slices.push(slice(
            format!("F={f:.2}"),
            FidelityKind::FixedCheckpoint,
            &grid,
            p.min_count,
            picked,
        ));
    }
    for center in MIN_SLICES {
        let (lo, hi) = (center - p.slice_halfwidth, center + p.slice_halfwidth);
        let picked = states
            .iter()
            .map(|s| &s.first_minimum)
            .filter(|r| (lo..=hi).contains(&r.fidelity))
            .map(|r| (r.concurrence, r.ratio));
        slices.push(slice(
            format!("F_min={center:.3}"),
            FidelityKind::FirstMinimum,
            &grid,
            p.min_count,
            picked,
        ));
    }

    Ok(Fig4Result {
        samples: p.samples,
        stationary,
        states,
        slices,
        grid,
        grid_counts,
    })
}

fn slice(
    label: String,
    kind: FidelityKind,
    grid: &GridSpec,
    min_count: usize,
    points: impl Iterator<Item = (f64, f64)>,
) -> Fig4Slice {
    let mut acc = vec![RunningStats::default(); grid.c_bins()];
    for (c, ratio) in points {
        if let Some(k) = grid.c_bin(c) {
            acc[k].push(ratio);
        }
    }
    let windows = acc
        .iter()
        .enumerate()
        .map(|(k, s)| WindowStat::from_stats(grid.c_edges[k], grid.c_edges[k + 1], s, min_count))
        .collect();
    Fig4Slice {
        label,
        kind,
        windows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Fig4Result {
        let p = Fig4Params {
            samples: 300,
            min_count: 5,
            ..Default::default()
        };
        run_fig4(&p, AlphaTable::shared()).unwrap()
    }

    #[test]
    fn checkpoints_are_ordered_and_bounded() {
        let r = small();
        assert_eq!(r.states.len() as u64 + r.stationary, 300);
        for s in &r.states {
            let m = &s.first_minimum;
            let mut prev_tau = 0.0;
            for (k, c) in s.checkpoints.iter().enumerate() {
                assert!((c.fidelity - (1.0 - (k + 1) as f64 / 20.0)).abs() < 1e-15);
                assert!(c.fidelity > m.fidelity);
                assert!(c.tau > prev_tau && c.tau <= m.tau);
                prev_tau = c.tau;
            }
        }
        assert!(r.records().all(|q| q.ratio >= 1.0 - 1e-9));
        assert_eq!(r.records().count(), r.record_count());
    }

    #[test]
    fn grid_partitions_the_first_minima() {
        let r = small();
        let total: usize = r.grid_counts.iter().flatten().sum();
        assert_eq!(total, r.states.len());
        assert_eq!(r.slices.len(), 4);
        let t = r.table();
        assert_eq!(t.header(), Fig4Result::COLUMNS);
        assert!(!t.is_empty());
    }

    #[test]
    fn rejects_off_grid_checkpoints() {
        let p = Fig4Params {
            checkpoint_steps: 15,
            ..Default::default()
        };
        assert!(run_fig4(&p, AlphaTable::shared()).is_err());
    }
}
