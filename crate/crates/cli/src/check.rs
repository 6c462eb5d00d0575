//! `verify`: independent checks of solver output over a grid of failure
//! rates, or a re-check of a previously reported measurement.

use std::io::Write;

use qubit_frir::solver::solve_frir;
use qubit_frir::verify::{compare_oracle, monte_carlo, MonteCarloResult, OracleStatus};
use qubit_frir::{HermitianOp, Povm, TwoStateEnsemble};

use crate::error::{CliError, CliResult};
use crate::input::ReportedSolution;

/// Accepted LP gap `analytic - lp`.
pub const GAP_RANGE: (f64, f64) = (-1e-9, 1e-3);
/// Sampled frequencies may stray this many analytic standard errors.
pub const MAX_SIGMAS: f64 = 4.0;
/// Reported and recomputed values of a stored measurement must agree to this.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

pub struct GridOptions {
    pub points: usize,
    pub directions: usize,
    pub samples: u64,
    pub seed: u64,
}

/// Standard scores of the sampled failure rate and conditional success rate
/// against their predicted values, using the predicted binomial spreads.
fn z_scores(mc: &MonteCarloResult, q: f64, r: f64) -> (f64, f64) {
    let n = mc.n_samples as f64;
    let z = |dev: f64, var: f64| if var > 0.0 { dev.abs() / var.sqrt() } else if dev.abs() <= 1e-12 { 0.0 } else { f64::INFINITY };
    let zq = z(mc.empirical_q - q, q * (1.0 - q) / n);
    let zr = if mc.correct + mc.wrong == 0 { 0.0 } else { z(mc.empirical_r_cor - r, r * (1.0 - r) / (n * (1.0 - q))) };
    (zq, zr)
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source: e }
}

pub fn verify_grid(ens: &TwoStateEnsemble, opts: &GridOptions, out: &mut impl Write) -> CliResult<()> {
    if opts.points == 0 {
        return Err(CliError::Input("--Q-grid must be at least 1".into()));
    }
    let grid: Vec<f64> = (0..opts.points).map(|k| k as f64 / opts.points as f64).collect();
    let oracle = compare_oracle(ens, &grid, opts.directions)?;
    writeln!(
        out,
        "{:>8} {:<26} {:>10} {:>11} {:>7} {:>7}  status",
        "Q", "regime", "KKT", "LP gap", "zQ", "zR"
    )
    .map_err(io)?;
    let mut failures = Vec::new();
    for (k, (&q, row)) in grid.iter().zip(&oracle.rows).enumerate() {
        let s = solve_frir(ens, q)?;
        let mut problems = Vec::new();
        if !s.kkt.passed {
            problems.push("KKT");
        }
        if row.status != OracleStatus::Optimal || row.gap < GAP_RANGE.0 || row.gap > GAP_RANGE.1 {
            problems.push("LP");
        }
        let (zq, zr) = if opts.samples > 0 {
            let mc = monte_carlo(ens, &s.povm, opts.samples, opts.seed.wrapping_add(k as u64))?;
            z_scores(&mc, q, s.r_cor)
        } else {
            (0.0, 0.0)
        };
        if zq > MAX_SIGMAS || zr > MAX_SIGMAS {
            problems.push("MC");
        }
        writeln!(
            out,
            "{q:>8.4} {:<26} {:>10.2e} {:>11.3e} {zq:>7.2} {zr:>7.2}  {}",
            s.regime.to_string(),
            s.kkt.worst_residual(),
            row.gap,
            if problems.is_empty() { "ok".to_string() } else { format!("FAIL ({})", problems.join(", ")) }
        )
        .map_err(io)?;
        if !problems.is_empty() {
            failures.push(format!("Q={q}"));
        }
    }
    writeln!(
        out,
        "LP gap over {} directions in [{:.3e}, {:.3e}]; {} Monte-Carlo samples per rate",
        oracle.n_directions, oracle.min_gap, oracle.max_gap, opts.samples
    )
    .map_err(io)?;
    if failures.is_empty() {
        writeln!(out, "all {} rates verified", grid.len()).map_err(io)?;
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} of {} rates: {}", failures.len(), grid.len(), failures.join(" "))))
    }
}

/// Recomputes failure rate and success probability of a stored measurement
/// and compares them with the values reported alongside it.
pub fn verify_povm(
    ens: &TwoStateEnsemble,
    reported: &ReportedSolution,
    povm: &Povm,
    samples: u64,
    seed: u64,
    out: &mut impl Write,
) -> CliResult<()> {
    let mut problems = Vec::new();
    let completeness = povm.completeness_residual(&HermitianOp::IDENTITY);
    let min_eig = povm.min_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    let q = ens.failure_probability(povm);
    let p = ens.success_probability(povm);
    let dq = (q - reported.failure_rate).abs();
    let dp = (p - reported.p_cor).abs();
    writeln!(out, "completeness residual  {completeness:.2e}").map_err(io)?;
    writeln!(out, "smallest eigenvalue    {min_eig:.2e}").map_err(io)?;
    writeln!(out, "Q      reported {:.12}  recomputed {q:.12}  diff {dq:.1e}", reported.failure_rate).map_err(io)?;
    writeln!(out, "P_cor  reported {:.12}  recomputed {p:.12}  diff {dp:.1e}", reported.p_cor).map_err(io)?;
    if completeness > ROUND_TRIP_TOL {
        problems.push("completeness");
    }
    if min_eig < -ROUND_TRIP_TOL {
        problems.push("positivity");
    }
    if dq > ROUND_TRIP_TOL {
        problems.push("failure rate");
    }
    if dp > ROUND_TRIP_TOL {
        problems.push("success probability");
    }
    if samples > 0 && problems.is_empty() {
        let mc = monte_carlo(ens, povm, samples, seed)?;
        let r = if q < 1.0 { p / (1.0 - q) } else { 0.0 };
        let (zq, zr) = z_scores(&mc, q, r);
        writeln!(out, "Monte-Carlo            zQ = {zq:.2}  zR = {zr:.2} over {samples} samples").map_err(io)?;
        if zq > MAX_SIGMAS || zr > MAX_SIGMAS {
            problems.push("sampling");
        }
    }
    if problems.is_empty() {
        writeln!(out, "measurement verified").map_err(io)?;
        Ok(())
    } else {
        Err(CliError::Verification(problems.join(", ")))
    }
}
