//! Dense curves along the fast-state family and the bound-function table.

use serde::Serialize;

use super::{Cell, ExperimentError, Table};
use crate::minima::{fast_state, fast_state_ratio_limits, fast_state_ratios};
use crate::qsl::AlphaTable;
use crate::states::concurrence_pure;

/// Default number of `F_min` nodes on `[0, 1]`.
pub const CURVE_POINTS: usize = 1001;

/// One fast state: its concurrence and both branch ratios at `Ω = π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub f_min: f64,
    pub concurrence: f64,
    pub ratio_energy: f64,
    pub ratio_spread: f64,
}

/// `n` equally spaced `F_min` nodes on `[0, 1]`. The ratios are `0/0` at
/// `F_min = 1`, where their limits are used.
pub fn fast_state_curve(n: usize, table: &AlphaTable) -> Result<Vec<CurvePoint>, ExperimentError> {
    if n < 2 {
        return Err(ExperimentError::InvalidParameter(format!(
            "a curve needs at least 2 points, got {n}"
        )));
    }
    (0..n)
        .map(|k| {
            let f = if k + 1 == n {
                1.0
            } else {
                k as f64 / (n - 1) as f64
            };
            let concurrence = concurrence_pure(&fast_state(f)?);
            let (ratio_energy, ratio_spread) = if f == 1.0 {
                fast_state_ratio_limits()
            } else {
                fast_state_ratios(f, table)?
            };
            Ok(CurvePoint {
                f_min: f,
                concurrence,
                ratio_energy,
                ratio_spread,
            })
        })
        .collect()
}

/// `f_min,concurrence` along the fast-state family.
pub fn run_fig2(n: usize, table: &AlphaTable) -> Result<Table, ExperimentError> {
    let mut t = Table::new(&["f_min", "concurrence"]);
    for p in fast_state_curve(n, table)? {
        t.push(vec![p.f_min.into(), p.concurrence.into()]);
    }
    Ok(t)
}

/// `f_min,ratio_energy,ratio_spread` along the fast-state family.
pub fn run_fig3(n: usize, table: &AlphaTable) -> Result<Table, ExperimentError> {
    let mut t = Table::new(&["f_min", "ratio_energy", "ratio_spread"]);
    for p in fast_state_curve(n, table)? {
        t.push(vec![
            p.f_min.into(),
            p.ratio_energy.into(),
            p.ratio_spread.into(),
        ]);
    }
    Ok(t)
}

/// `f,alpha,beta` at the table nodes.
pub fn alpha_table_rows(table: &AlphaTable) -> Table {
    let mut t = Table::new(&["f", "alpha", "beta"]);
    for (f, a, b) in table.rows() {
        t.push(vec![Cell::Float(f), a.into(), b.into()]);
    }
    t
}
