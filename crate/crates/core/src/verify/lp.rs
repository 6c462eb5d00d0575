//! Discretized linear-programming attack on the original problem.
//!
//! Each measurement element is restricted to a nonnegative combination of
//! the projectors `½(I + n̂_k·σ)` over a fixed direction set plus a multiple
//! of the identity. This shares nothing with the analytic path and can only
//! under-estimate the optimum.

use std::f64::consts::PI;

use crate::ensemble::TwoStateEnsemble;
use crate::error::{Error, Result};
use crate::linalg::BlochVector;

use super::simplex::{self, LpStatus, SimplexOptions};

pub const MIN_DIRECTIONS: usize = 50;

/// Reciprocal powers of the plastic number, the root of `x³ = x + 1`.
const ALPHA1: f64 = 1.0 / 1.324_717_957_244_746;
const ALPHA2: f64 = ALPHA1 * ALPHA1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub p_cor_lp: f64,
    pub n_directions: usize,
    pub achieved_q: f64,
    pub status: OracleStatus,
}

const AXES: [BlochVector; 6] = [
    BlochVector::new(0.0, 0.0, 1.0),
    BlochVector::new(0.0, 0.0, -1.0),
    BlochVector::new(1.0, 0.0, 0.0),
    BlochVector::new(-1.0, 0.0, 0.0),
    BlochVector::new(0.0, 1.0, 0.0),
    BlochVector::new(0.0, -1.0, 0.0),
];

/// First `n` directions: the six coordinate axes, then an area-uniform
/// low-discrepancy sequence on the sphere. The sets are nested:
/// `directions(n)` is a prefix of `directions(n + 1)`.
pub fn directions(n: usize) -> Vec<BlochVector> {
    let spread = (0..n.saturating_sub(AXES.len())).map(|k| {
        let u = (0.5 + ALPHA1 * k as f64).fract();
        let w = (0.5 + ALPHA2 * k as f64).fract();
        let z = 1.0 - 2.0 * u;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = 2.0 * PI * w;
        BlochVector::new(r * phi.cos(), r * phi.sin(), z)
    });
    AXES.iter().copied().take(n).chain(spread).collect()
}

/// Best success probability at failure rate `q_fail` over the discretized
/// measurement set.
pub fn lp_oracle(ens: &TwoStateEnsemble, q_fail: f64, n_directions: usize) -> Result<OracleResult> {
    if n_directions < MIN_DIRECTIONS {
        return Err(Error::InvalidArgument(format!(
            "the oracle needs at least {MIN_DIRECTIONS} directions, got {n_directions}"
        )));
    }
    if !(0.0..1.0).contains(&q_fail) {
        return Err(Error::QOutOfRange(q_fail));
    }
    let dirs = directions(n_directions);
    let (v1, v2) = ens.bloch_vectors();
    let v0 = v1 * ens.q1 + v2 * ens.q2;
    let weighted = [(0.0, v0), (ens.q1, v1), (ens.q2, v2)];

    // Column layout per outcome i: n projector weights, then the identity weight.
    let block = n_directions + 1;
    let cols = 3 * block;
    let mut a = vec![vec![0.0; cols]; 5];
    let mut c = vec![0.0; cols];
    for (i, &(qi, vi)) in weighted.iter().enumerate() {
        for (k, nk) in dirs.iter().enumerate() {
            let j = i * block + k;
            a[0][j] = 0.5;
            a[1][j] = 0.5 * nk.x;
            a[2][j] = 0.5 * nk.y;
            a[3][j] = 0.5 * nk.z;
            if i == 0 {
                a[4][j] = 0.5 * (1.0 + nk.dot(v0));
            }
            c[j] = qi * 0.5 * (1.0 + nk.dot(vi));
        }
        let j = i * block + n_directions;
        a[0][j] = 1.0;
        if i == 0 {
            a[4][j] = 1.0;
        }
        c[j] = qi;
    }
    let b = [1.0, 0.0, 0.0, 0.0, q_fail];
    let sol = simplex::solve(&a, &b, &c, &SimplexOptions::default());
    let status = match sol.status {
        LpStatus::Optimal => OracleStatus::Optimal,
        LpStatus::Infeasible | LpStatus::Unbounded => OracleStatus::Infeasible,
        LpStatus::IterationLimit => OracleStatus::IterationLimit,
    };
    let achieved_q = (0..block).map(|j| a[4][j] * sol.x[j]).sum();
    Ok(OracleResult { p_cor_lp: sol.objective, n_directions, achieved_q, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit_and_nested() {
        let small = directions(100);
        let big = directions(300);
        assert_eq!(&big[..100], &small[..]);
        assert!(big.iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn directions_are_balanced() {
        let dirs = directions(2000);
        let mean = dirs.iter().fold(BlochVector::ZERO, |acc, &v| acc + v) * (1.0 / 2000.0);
        assert!(mean.norm() < 2e-3);
    }

    #[test]
    fn orthogonal_quarter_failure() {
        let r = lp_oracle(&TwoStateEnsemble::orthogonal(), 0.25, 200).unwrap();
        assert_eq!(r.status, OracleStatus::Optimal);
        assert!((r.p_cor_lp - 0.75).abs() < 1e-6);
        assert!((r.achieved_q - 0.25).abs() < 1e-9);
    }

    #[test]
    fn demo_helstrom_bound() {
        let ens = TwoStateEnsemble::demo();
        let r = lp_oracle(&ens, 0.0, 2000).unwrap();
        let helstrom = 0.5 * (1.0 + (0.12f64 * 0.12 + 0.02 * 0.02 + 0.64 * 0.64).sqrt());
        assert_eq!(r.status, OracleStatus::Optimal);
        assert!(r.p_cor_lp <= helstrom + 1e-9 && r.p_cor_lp >= helstrom - 1e-3, "{}", r.p_cor_lp);
    }

    #[test]
    fn rejects_bad_arguments() {
        let ens = TwoStateEnsemble::demo();
        assert!(lp_oracle(&ens, 0.2, 10).is_err());
        assert!(lp_oracle(&ens, 1.0, 100).is_err());
    }
}
