//! Monte Carlo and sweep pipelines producing the tables behind each figure.
//!
//! Every sampled quantity is drawn from its own [`RandomStream`] keyed by the
//! sample index, mapped in parallel and reduced in index order, so results
//! do not depend on the number of worker threads.

mod audit;
mod curves;
mod fig1;
mod fig4;
mod fig5;
mod stats;
mod table;

pub use audit::{ks_statistic, ks_two_sample, run_sample_audit, AuditCheck, SampleAuditParams};
pub use curves::{
    alpha_table_rows, fast_state_curve, run_fig2, run_fig3, CurvePoint, CURVE_POINTS,
};
pub use fig1::{
    run_fig1a, run_fig1b, Fig1aParams, Fig1aPoint, Fig1aResult, Fig1bParams, Fig1bRecord,
    Fig1bResult, RatioRange, BOUNDARY_TOL, MIN_ACCEPTED, SEPARABLE_TOL,
};
pub use fig4::{run_fig4, Fig4Params, Fig4Result, Fig4Slice, Fig4State};
pub use fig5::{run_fig5, Fig5Params, Fig5Result, IhBin};
pub use stats::{spearman, GridSpec, RunningStats, WindowStat};
pub use table::{Cell, Table};

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::families::FamilyError;
use crate::minima::MinimaError;
use crate::qsl::{Branch, QslBound, QslError};
use crate::sampling::RandomStream;
use crate::states::StateError;

/// Ratios below `1 - RATIO_TOL` would mean the bound is violated.
pub const RATIO_TOL: f64 = 1e-9;
/// Progress is logged every this many samples.
pub const PROGRESS_EVERY: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("only {accepted} samples accepted, need at least {required}")]
    InsufficientSamples { accepted: usize, required: usize },
    #[error("speed limit violated: τ/T = {ratio} at C = {concurrence}, F = {fidelity}")]
    BoundViolation {
        ratio: f64,
        concurrence: f64,
        fidelity: f64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Minima(#[from] MinimaError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Qsl(#[from] QslError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Which fidelity a record refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FidelityKind {
    FirstMinimum,
    FixedCheckpoint,
}

impl FidelityKind {
    pub fn label(&self) -> &'static str {
        match self {
            FidelityKind::FirstMinimum => "first_minimum",
            FidelityKind::FixedCheckpoint => "fixed",
        }
    }
}

/// One `(C, F, τ/T)` observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QslRecord {
    pub concurrence: f64,
    pub fidelity: f64,
    pub fidelity_kind: FidelityKind,
    pub tau: f64,
    pub t_bound: f64,
    pub ratio: f64,
    pub branch: Branch,
}

impl QslRecord {
    /// Builds the record and rejects it if `τ < T (1 - RATIO_TOL)`.
    pub fn new(
        concurrence: f64,
        fidelity: f64,
        fidelity_kind: FidelityKind,
        tau: f64,
        bound: &QslBound,
    ) -> Result<Self, ExperimentError> {
        let ratio = tau / bound.t_bound;
        if ratio.is_nan() || ratio < 1.0 - RATIO_TOL {
            return Err(ExperimentError::BoundViolation {
                ratio,
                concurrence,
                fidelity,
            });
        }
        Ok(Self {
            concurrence,
            fidelity,
            fidelity_kind,
            tau,
            t_bound: bound.t_bound,
            ratio,
            branch: bound.branch,
        })
    }
}

/// Maps `f` over sample indices `start..start + n` in parallel, each call
/// with its own stream, and returns the results in index order.
pub(crate) fn par_map_streams<T, F>(seed: u64, start: u64, n: u64, label: &str, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut RandomStream) -> T + Sync,
{
    let done = AtomicU64::new(0);
    (start..start + n)
        .into_par_iter()
        .map(|i| {
            let mut rng = RandomStream::new(seed, i);
            let out = f(i, &mut rng);
            let k = done.fetch_add(1, Ordering::Relaxed) + 1;
            if k.is_multiple_of(PROGRESS_EVERY) {
                log::info!("{label}: {} samples", start + k);
            }
            out
        })
        .collect()
}
