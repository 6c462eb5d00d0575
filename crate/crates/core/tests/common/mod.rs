//! Random ensembles shared by the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;
use qubit_frir::linalg::{from_bloch, ket_norm, Ket};
use qubit_frir::{derive, BlochVector, DerivedData, HermitianOp, TwoStateEnsemble};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the ball of radius `r_max`.
pub fn bloch_in_ball(rng: &mut ChaCha8Rng, r_max: f64) -> BlochVector {
    loop {
        let v = BlochVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v * r_max;
        }
    }
}

pub fn unit_ket(rng: &mut ChaCha8Rng) -> Ket {
    let k = [
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    ];
    let n = ket_norm(&k);
    [k[0] / n, k[1] / n]
}

/// Generic ensemble: priors in [0.05, 0.95], Bloch vectors of length at most
/// 0.97 and at least 0.2 apart, so `ρ0` is well conditioned.
pub fn random_ensemble(rng: &mut ChaCha8Rng) -> (TwoStateEnsemble, DerivedData) {
    loop {
        let q1 = rng.gen_range(0.05..0.95);
        let v1 = bloch_in_ball(rng, 0.97);
        let v2 = bloch_in_ball(rng, 0.97);
        if (v1 - v2).norm() < 0.2 {
            continue;
        }
        let ens = TwoStateEnsemble::from_bloch(q1, v1, v2).unwrap();
        if let Ok(d) = derive(&ens) {
            if d.c1 + d.c2 > 1.05 && d.abs_rho12() > 1e-6 {
                return (ens, d);
            }
        }
    }
}

/// Ensemble with confidences `c1, c2`, a random basis, and `ρ0` whose
/// entries in that basis are `ρ11`, `1 - ρ11` and `ρ12 = a·e^{iφ}`.
pub fn synthesized(c1: f64, c2: f64, rho11: f64, a: f64, phase: f64, nu1: Ket) -> TwoStateEnsemble {
    let nu2: Ket = [-nu1[1].conj(), nu1[0].conj()];
    let coeffs = HermitianOp::new(rho11, 1.0 - rho11, Complex64::from_polar(a, phase));
    let rho0 = HermitianOp::from_basis(&coeffs, &[nu1, nu2]);
    TwoStateEnsemble::synthesize(c1, c2, rho0, nu1).unwrap()
}

/// Equal confidences with `ρ11, ρ22 ≥ |ρ12|`.
pub fn random_equal_c_balanced(rng: &mut ChaCha8Rng) -> TwoStateEnsemble {
    let c = rng.gen_range(0.6..0.98);
    let rho11: f64 = rng.gen_range(0.25..0.75);
    let a = rng.gen_range(0.02..rho11.min(1.0 - rho11)) * 0.95;
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let nu = unit_ket(rng);
    synthesized(c, c, rho11, a, phase, nu)
}

/// Equal confidences with `ρ11 < |ρ12| ≤ ρ22`.
pub fn random_equal_c_lopsided(rng: &mut ChaCha8Rng) -> TwoStateEnsemble {
    let c = rng.gen_range(0.6..0.98);
    let rho11: f64 = rng.gen_range(0.08..0.3);
    let rho22 = 1.0 - rho11;
    let a_max = (rho11 * rho22).sqrt();
    let a = rng.gen_range(rho11 + 0.2 * (a_max - rho11)..rho11 + 0.8 * (a_max - rho11));
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let nu = unit_ket(rng);
    synthesized(c, c, rho11, a, phase, nu)
}

/// Ensemble with vanishing `ρ12` (basis = eigenbasis of `ρ0`).
pub fn random_diagonal(rng: &mut ChaCha8Rng) -> TwoStateEnsemble {
    loop {
        let c1: f64 = rng.gen_range(0.1..0.95);
        let c2 = rng.gen_range(c1.max(1.05 - c1)..0.99);
        let rho11 = rng.gen_range(0.2..0.8);
        let nu = unit_ket(rng);
        let ens = synthesized(c1, c2, rho11, 0.0, 0.0, nu);
        if derive(&ens).is_ok() {
            return ens;
        }
    }
}

/// Random global unitary as a pair of orthonormal columns.
pub fn random_unitary(rng: &mut ChaCha8Rng) -> [Ket; 2] {
    let k = unit_ket(rng);
    [k, [-k[1].conj(), k[0].conj()]]
}

pub fn rotate(ens: &TwoStateEnsemble, u: &[Ket; 2]) -> TwoStateEnsemble {
    TwoStateEnsemble::new(ens.q1, HermitianOp::from_basis(&ens.rho1, u), ens.q2, HermitianOp::from_basis(&ens.rho2, u))
        .unwrap()
}

pub fn pure(v: BlochVector) -> HermitianOp {
    from_bloch(v, 1.0)
}
