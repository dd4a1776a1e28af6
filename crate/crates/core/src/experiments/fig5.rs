//! MEMS and IH families under `H_II`: the MEMS ratio curve and the IH
//! bin averages over draws that decay less than the MEMS of equal concurrence.

use serde::Serialize;

use super::{par_map_streams, ExperimentError, GridSpec, RunningStats, Table};
use crate::dynamics::LocalHamiltonian;
use crate::families::{ih_speed_ratio, mems_speed_ratio, sample_ih, FamilyRatio};
use crate::qsl::AlphaTable;

/// IH draws are generated in blocks of this many streams.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig5Params {
    pub seed: u64,
    pub hamiltonian: LocalHamiltonian,
    /// MEMS curve on `x = x_min, x_min + step, ..., 1`.
    pub mems_x_min: f64,
    pub mems_points: usize,
    /// Filtered IH draws to collect.
    pub ih_samples: u64,
    /// Give up after this many raw IH draws.
    pub max_draws: u64,
    pub c_bins: usize,
    pub min_count: usize,
}

impl Default for Fig5Params {
    fn default() -> Self {
        Self {
            seed: 1,
            hamiltonian: LocalHamiltonian::h_ii(),
            mems_x_min: 0.02,
            mems_points: 99,
            ih_samples: 100_000,
            max_draws: 100_000_000,
            c_bins: 20,
            min_count: 50,
        }
    }
}

/// IH averages in one concurrence bin, with the MEMS reference at its center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IhBin {
    pub c_lo: f64,
    pub c_hi: f64,
    pub count: usize,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub mean_f_min: f64,
    pub mems_f_min: f64,
    pub mems_ratio: f64,
    pub reliable: bool,
}

impl IhBin {
    pub fn c_center(&self) -> f64 {
        0.5 * (self.c_lo + self.c_hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig5Result {
    pub mems: Vec<FamilyRatio>,
    pub ih_bins: Vec<IhBin>,
    pub ih_draws: u64,
    pub ih_accepted: u64,
    pub ih_records: Vec<FamilyRatio>,
}

impl Fig5Result {
    pub const COLUMNS: [&'static str; 6] = ["series", "c", "count", "ratio", "std_ratio", "f_min"];

    /// The MEMS curve, then reliable IH bins at their centers.
    pub fn table(&self) -> Table {
        let mut t = Table::new(&Self::COLUMNS);
        for m in &self.mems {
            t.push(vec![
                "mems".into(),
                m.concurrence.into(),
                1usize.into(),
                m.ratio.into(),
                0.0.into(),
                m.f_min.into(),
            ]);
        }
        for b in self.ih_bins.iter().filter(|b| b.reliable) {
            t.push(vec![
                "ih".into(),
                b.c_center().into(),
                b.count.into(),
                b.mean_ratio.into(),
                b.std_ratio.into(),
                b.mean_f_min.into(),
            ]);
        }
        t
    }
}

pub fn run_fig5(p: &Fig5Params, table: &AlphaTable) -> Result<Fig5Result, ExperimentError> {
    if !(p.mems_x_min > 0.0 && p.mems_x_min < 1.0) || p.mems_points < 2 || p.c_bins == 0 {
        return Err(ExperimentError::InvalidParameter(format!(
            "fig5 needs 0 < mems_x_min < 1, mems_points ≥ 2 and c_bins ≥ 1, got {p:?}"
        )));
    }
    let h = &p.hamiltonian;
    let step = (1.0 - p.mems_x_min) / (p.mems_points - 1) as f64;
    let mems = (0..p.mems_points)
        .map(|k| {
            let x = if k + 1 == p.mems_points {
                1.0
            } else {
                p.mems_x_min + k as f64 * step
            };
            mems_speed_ratio(x, h, table)
        })
        .collect::<Result<Vec<_>, _>>()?;

    // MEMS reference at each bin center: the IH filter threshold and the comparison value
    let grid = GridSpec::uniform(1, p.c_bins);
    let reference = (0..p.c_bins)
        .map(|k| mems_speed_ratio(grid.c_center(k), h, table))
        .collect::<Result<Vec<_>, _>>()?;

    let mut ih_records = Vec::new();
    let mut draws = 0;
    while (ih_records.len() as u64) < p.ih_samples {
        if draws >= p.max_draws {
            return Err(ExperimentError::InsufficientSamples {
                accepted: ih_records.len(),
                required: p.ih_samples as usize,
            });
        }
        let n = CHUNK.min(p.max_draws - draws);
        let block = par_map_streams(p.seed, draws, n, "fig5", |_, rng| {
            let ih = sample_ih(rng);
            let k = grid
                .c_bin(ih.concurrence())
                .expect("concurrence lies in [0, 1]");
            let r = ih_speed_ratio(&ih, h, table)?;
            Ok::<_, ExperimentError>((r.f_min > reference[k].f_min).then_some(r))
        });
        for r in block {
            if let Some(r) = r? {
                ih_records.push(r);
                if ih_records.len() as u64 == p.ih_samples {
                    break;
                }
            }
        }
        draws += n;
    }

    let mut stats = vec![(RunningStats::default(), RunningStats::default()); p.c_bins];
    for r in &ih_records {
        let k = grid
            .c_bin(r.concurrence)
            .expect("concurrence lies in [0, 1]");
        stats[k].0.push(r.ratio);
        stats[k].1.push(r.f_min);
    }
    let ih_bins = stats
        .iter()
        .enumerate()
        .map(|(k, (ratio, f))| IhBin {
            c_lo: grid.c_edges[k],
            c_hi: grid.c_edges[k + 1],
            count: ratio.count(),
            mean_ratio: ratio.mean(),
            std_ratio: ratio.std(),
            mean_f_min: f.mean(),
            mems_f_min: reference[k].f_min,
            mems_ratio: reference[k].ratio,
            reliable: ratio.count() >= p.min_count,
        })
        .collect();

    Ok(Fig5Result {
        mems,
        ih_bins,
        ih_draws: draws,
        ih_accepted: ih_records.len() as u64,
        ih_records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_orders_ih_above_mems() {
        let p = Fig5Params {
            ih_samples: 3000,
            min_count: 20,
            ..Default::default()
        };
        let r = run_fig5(&p, AlphaTable::shared()).unwrap();
        assert_eq!(r.ih_accepted, 3000);
        assert_eq!(r.mems.len(), 99);
        assert_eq!(r.mems.last().unwrap().concurrence, 1.0);
        assert_eq!(r.ih_bins.iter().map(|b| b.count).sum::<usize>(), 3000);
        for b in r.ih_bins.iter().filter(|b| b.reliable) {
            assert!(b.mean_f_min > b.mems_f_min);
            assert!(b.mean_ratio >= b.mems_ratio, "{b:?}");
        }
        assert!(r.ih_records.iter().all(|x| x.ratio >= 1.0 - 1e-9));
    }
}
