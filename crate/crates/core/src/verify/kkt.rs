//! Optimality certificates for the modified problem in barred form.

use crate::ensemble::DerivedData;
use crate::linalg::HermitianOp;
use crate::povm::Povm;

/// Residuals of primal feasibility, dual feasibility, dual consistency,
/// complementary slackness and the duality gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    /// `‖Σ M̄_i - ρ0‖`
    pub completeness_residual: f64,
    /// Smallest eigenvalue of each `M̄_i`.
    pub psd_margins: [f64; 3],
    /// Smallest eigenvalue of each `τ̄_i`.
    pub dual_psd_margins: [f64; 3],
    /// `max_i ‖qI + τ̄0 - ρ̄_i - τ̄_i‖`
    pub dual_consistency_residual: f64,
    /// `tr[τ̄_i M̄_i]`
    pub slackness: [f64; 3],
    /// `tr[ρ0 (qI + τ̄0)] - P̄`
    pub duality_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl KktReport {
    /// Largest violation over all conditions; `passed` iff this is within
    /// the tolerance.
    pub fn worst_residual(&self) -> f64 {
        let mut worst = self.completeness_residual.max(self.dual_consistency_residual).max(self.duality_gap.abs());
        for i in 0..3 {
            worst = worst
                .max(-self.psd_margins[i])
                .max(-self.dual_psd_margins[i])
                .max(self.slackness[i].abs());
        }
        worst
    }
}

/// Dual slacks `τ̄_i = K̄ - ρ̄_i` induced by a dual operator `K̄`.
pub fn dual_from_k(d: &DerivedData, q: f64, k_bar: &HermitianOp) -> [HermitianOp; 3] {
    [0, 1, 2].map(|i| *k_bar - d.barrho(i, q))
}

/// Checks a candidate primal/dual pair for the modified problem at degree `q`.
pub fn check_kkt(d: &DerivedData, q: f64, bar_povm: &Povm, tau: &[HermitianOp; 3]) -> KktReport {
    check_kkt_with(d, q, bar_povm, tau, d.tol.kkt)
}

pub fn check_kkt_with(d: &DerivedData, q: f64, bar_povm: &Povm, tau: &[HermitianOp; 3], tolerance: f64) -> KktReport {
    let m = &bar_povm.elements;
    let k_bar = HermitianOp::scaled_identity(q) + tau[0];
    let dual_consistency_residual =
        (0..3).map(|i| k_bar.max_abs_diff(&(d.barrho(i, q) + tau[i]))).fold(0.0, f64::max);
    let p_bar = crate::boundary::modified_value(d, q, bar_povm);
    let mut report = KktReport {
        completeness_residual: bar_povm.completeness_residual(&d.rho0),
        psd_margins: bar_povm.min_eigenvalues(),
        dual_psd_margins: tau.map(|t| t.min_eigenvalue()),
        dual_consistency_residual,
        slackness: [0, 1, 2].map(|i| tau[i].trace_product(&m[i])),
        duality_gap: d.rho0.trace_product(&k_bar) - p_bar,
        tolerance,
        passed: false,
    };
    report.passed = report.worst_residual() <= tolerance;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{boundary_solution, q0_upper};
    use crate::ensemble::{derive, TwoStateEnsemble};
    use crate::interior::interior_eval;

    #[test]
    fn upper_boundary_certificate() {
        let d = derive(&TwoStateEnsemble::demo()).unwrap();
        let bc = q0_upper(&d);
        let s = boundary_solution(&d, &bc, 0.8, None).unwrap();
        let tau = [0, 1, 2].map(|i| HermitianOp::scaled_identity(d.c2) - d.barrho(i, d.c2));
        let r = check_kkt(&d, d.c2, &s.bar_povm, &tau);
        assert!(r.passed);
        assert!(r.worst_residual() <= 1e-12, "{r:?}");
    }

    #[test]
    fn interior_certificate() {
        let d = derive(&TwoStateEnsemble::demo()).unwrap();
        let ev = interior_eval(&d, 0.72).unwrap();
        let r = check_kkt(&d, 0.72, &ev.bar_povm, &dual_from_k(&d, 0.72, &ev.k_bar));
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn perturbed_povm_fails() {
        let d = derive(&TwoStateEnsemble::demo()).unwrap();
        let ev = interior_eval(&d, 0.72).unwrap();
        let mut bad = ev.bar_povm;
        bad.elements[0] += HermitianOp::projector(&d.nu1) * 1e-3;
        let r = check_kkt(&d, 0.72, &bad, &dual_from_k(&d, 0.72, &ev.k_bar));
        assert!(!r.passed);
        assert!(r.completeness_residual > 1e-4);
    }

    #[test]
    fn wrong_degree_fails() {
        let d = derive(&TwoStateEnsemble::demo()).unwrap();
        let ev = interior_eval(&d, 0.72).unwrap();
        let r = check_kkt(&d, 0.75, &ev.bar_povm, &dual_from_k(&d, 0.75, &ev.k_bar));
        assert!(!r.passed);
    }
}
