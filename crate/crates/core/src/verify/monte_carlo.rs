//! Seeded simulation of repeated measurements on the ensemble.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::TwoStateEnsemble;
use crate::error::{Error, Result};
use crate::povm::Povm;

const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    pub n_samples: u64,
    pub inconclusive: u64,
    pub correct: u64,
    pub wrong: u64,
    pub empirical_q: f64,
    /// Fraction of conclusive outcomes that named the true state; NaN when
    /// nothing was conclusive.
    pub empirical_r_cor: f64,
    pub q_stderr: f64,
    pub r_cor_stderr: f64,
}

/// Outcome distribution `tr[ρ M_j]` for each state.
fn outcome_weights(ens: &TwoStateEnsemble, povm: &Povm) -> Result<[[f64; 3]; 2]> {
    let mut w = [[0.0; 3]; 2];
    for (s, rho) in [ens.rho1, ens.rho2].iter().enumerate() {
        for (j, m) in povm.elements.iter().enumerate() {
            let p = rho.trace_product(m);
            if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
                return Err(Error::InvalidPovm(format!("outcome {j} has probability {p} on state {}", s + 1)));
            }
            w[s][j] = p.max(0.0);
        }
        let total: f64 = w[s].iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidPovm(format!("outcome probabilities on state {} sum to {total}", s + 1)));
        }
    }
    Ok(w)
}

pub fn monte_carlo(ens: &TwoStateEnsemble, povm: &Povm, n_samples: u64, seed: u64) -> Result<MonteCarloResult> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let w = outcome_weights(ens, povm)?;
    let dists = [
        WeightedIndex::new(w[0]).map_err(|e| Error::InvalidPovm(e.to_string()))?,
        WeightedIndex::new(w[1]).map_err(|e| Error::InvalidPovm(e.to_string()))?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut inconclusive, mut correct, mut wrong) = (0u64, 0u64, 0u64);
    for _ in 0..n_samples {
        let state = if rng.gen::<f64>() < ens.q1 { 0 } else { 1 };
        match dists[state].sample(&mut rng) {
            0 => inconclusive += 1,
            j if j == state + 1 => correct += 1,
            _ => wrong += 1,
        }
    }
    let n = n_samples as f64;
    let empirical_q = inconclusive as f64 / n;
    let conclusive = (correct + wrong) as f64;
    let empirical_r_cor = correct as f64 / conclusive;
    Ok(MonteCarloResult {
        n_samples,
        inconclusive,
        correct,
        wrong,
        empirical_q,
        empirical_r_cor,
        q_stderr: (empirical_q * (1.0 - empirical_q) / n).sqrt(),
        r_cor_stderr: (empirical_r_cor * (1.0 - empirical_r_cor) / conclusive).sqrt(),
    })
}
