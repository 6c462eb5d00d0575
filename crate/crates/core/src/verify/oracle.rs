//! Analytic optimum against the discretized LP optimum over a grid of rates.

use crate::ensemble::TwoStateEnsemble;
use crate::error::{Error, Result};
use crate::solver::solve_frir;

use super::lp::{lp_oracle, OracleStatus};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub failure_rate: f64,
    pub analytic: f64,
    pub lp: f64,
    /// `analytic - lp`; never below `-1e-9` for a correct solver.
    pub gap: f64,
    pub status: OracleStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub rows: Vec<OracleRow>,
    pub n_directions: usize,
    pub max_gap: f64,
    pub min_gap: f64,
}

impl OracleComparison {
    /// Every LP solved to optimality and every gap lies in `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.rows.iter().all(|r| r.status == OracleStatus::Optimal && r.gap >= lo && r.gap <= hi)
    }
}

pub fn compare_oracle(ens: &TwoStateEnsemble, grid: &[f64], n_directions: usize) -> Result<OracleComparison> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("the comparison grid is empty".into()));
    }
    let rows = grid
        .iter()
        .map(|&q| {
            let analytic = solve_frir(ens, q)?.p_cor;
            let lp = lp_oracle(ens, q, n_directions)?;
            Ok(OracleRow { failure_rate: q, analytic, lp: lp.p_cor_lp, gap: analytic - lp.p_cor_lp, status: lp.status })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_gap = rows.iter().map(|r| r.gap).fold(f64::NEG_INFINITY, f64::max);
    let min_gap = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    Ok(OracleComparison { rows, n_directions, max_gap, min_gap })
}
