//! The modified problem at an inconclusive degree strictly between the two
//! special degrees.
//!
//! There the optimum is unique. Either all three outcomes are used, with the
//! dual slack `τ̄0` of rank one described by `λ1, λ2` and the outcome weights
//! `η0, η1, η2`, or one conclusive outcome is dropped and the problem reduces
//! to a two-outcome Helstrom-type measurement between `qρ0` and `q_x ρ_x`.

use std::fmt;

use num_complex::Complex64;

use crate::boundary::{q0_lower, q0_upper};
use crate::ensemble::DerivedData;
use crate::error::{Error, Result};
use crate::linalg::{from_bloch, BlochVector, HermitianOp};
use crate::povm::Povm;
use crate::tol::clamped_sqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    AllNonzero,
    /// `M2 = 0`
    TwoElementX1,
    /// `M1 = 0`
    TwoElementX2,
    /// `ρ12 = 0` with `C1 < C2`: `M1 = 0` and `M0, M2` diagonal in the `ν` basis.
    Diagonal,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AllNonzero => "all_nonzero",
            Self::TwoElementX1 => "two_element_x1",
            Self::TwoElementX2 => "two_element_x2",
            Self::Diagonal => "diagonal",
        })
    }
}

/// Eigen-data of the dual slack `τ̄0` and the traces `η_i = tr M̄_i` of the
/// all-nonzero candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorScalars {
    pub lambda1: f64,
    pub lambda2: f64,
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteriorEval {
    pub q: f64,
    pub branch: Branch,
    /// Present whenever the all-nonzero formulas are defined at `q`.
    pub scalars: Option<InteriorScalars>,
    /// `tr[ρ0 M0]` of the optimal measurement.
    pub p_i: f64,
    pub p_bar: f64,
    pub bar_povm: Povm,
    pub povm: Povm,
    pub k_bar: HermitianOp,
}

fn check_denominators(d: &DerivedData, q: f64) -> Result<()> {
    if (2.0 * q - 1.0).abs() <= d.tol.sing {
        return Err(Error::DomainError { q, reason: "q = 1/2 makes the interior formulas singular" });
    }
    if d.c1 + d.c2 - 1.0 <= d.tol.degeneracy {
        return Err(Error::DomainError { q, reason: "C1 + C2 = 1" });
    }
    Ok(())
}

/// `(λ1, λ2)` from the general formulas.
pub fn lambdas(d: &DerivedData, q: f64) -> Result<(f64, f64)> {
    check_denominators(d, q)?;
    let (c1, c2) = (d.c1, d.c2);
    let den = (2.0 * q - 1.0) * (c1 + c2 - 1.0);
    let l1 = (2.0 * c2 - 1.0) * (c1 - q) * (q - 1.0 + c1) / den;
    let l2 = (2.0 * c1 - 1.0) * (c2 - q) * (q - 1.0 + c2) / den;
    Ok((l1, l2))
}

/// `λ1 = λ2 = (C - q)(q - 1 + C)/(2q - 1)` for `C1 = C2 = C`.
pub fn lambdas_equal_c(d: &DerivedData, q: f64) -> Result<(f64, f64)> {
    check_denominators(d, q)?;
    let c = d.c2;
    let l = (c - q) * (q - 1.0 + c) / (2.0 * q - 1.0);
    Ok((l, l))
}

/// General formulas for `(η0, η1, η2)`, each computed independently.
fn etas_general(d: &DerivedData, q: f64) -> Result<(f64, f64, f64)> {
    check_denominators(d, q)?;
    let (c1, c2) = (d.c1, d.c2);
    let (r11, r22, a) = (d.rho11, d.rho22, d.abs_rho12());
    let (a1, a2) = (2.0 * c1 - 1.0, 2.0 * c2 - 1.0);
    let t = 2.0 * q - 1.0;
    let (m1, m2) = (c1 - q, c2 - q);
    let (p1, p2) = (q - 1.0 + c1, q - 1.0 + c2);

    let s = clamped_sqrt(a1 * a2 * m1 * m2 * p1 * p2, d.tol.sqrt_clamp);
    if !(s > 0.0) {
        return Err(Error::DomainError { q, reason: "square root in the weight formulas is not positive" });
    }
    let den = 2.0 * t * t * (c1 + c2 - 1.0);

    let eta0 = (a1 * a2 - t * t) / den
        * (1.0 - 2.0 * r11 * c1 - 2.0 * r22 * c2 + a * a1 * a2 * (m1 * m2 + p1 * p2) / s);
    let eta1 = (a1 * a2 + 2.0 * (c2 - c1) * t + t * t) / den
        * (r11 * p1 + r22 * m2 - a * m2 * p1 * (a1 * p2 + a2 * m1) / s);
    let eta2 = (a1 * a2 - 2.0 * (c2 - c1) * t + t * t) / den
        * (r11 * m1 + r22 * p2 - a * m1 * p2 * (a2 * p1 + a1 * m2) / s);
    Ok((eta0, eta1, eta2))
}

/// Weights for `C1 = C2 = C`, where the square root factors out.
fn etas_equal_c(d: &DerivedData, q: f64) -> Result<(f64, f64, f64)> {
    check_denominators(d, q)?;
    let c = d.c2;
    let (r11, r22, a) = (d.rho11, d.rho22, d.abs_rho12());
    let t = 2.0 * q - 1.0;
    let (m, p) = (c - q, q - 1.0 + c);
    let a1 = 2.0 * c - 1.0;
    let eta0 = 2.0 / (t * t) * (a * m * m + a * p * p - m * p);
    let pre = (a1 * a1 + t * t) / (2.0 * t * t * a1);
    let eta1 = pre * (r11 * p + r22 * m - a * a1);
    let eta2 = pre * (r11 * m + r22 * p - a * a1);
    Ok((eta0, eta1, eta2))
}

fn assemble(d: &DerivedData, q: f64, (l1, l2): (f64, f64), (e0, e1, e2): (f64, f64, f64)) -> Result<InteriorScalars> {
    let bookkeeping = 1.0 - e1 - e2;
    let scale = 1.0f64.max(e1.abs() + e2.abs());
    if (e0 - bookkeeping).abs() > d.tol.eta_consistency * scale {
        return Err(Error::Inconsistent(format!(
            "eta0 = {e0} disagrees with 1 - eta1 - eta2 = {bookkeeping} at q = {q}"
        )));
    }
    Ok(InteriorScalars { lambda1: l1, lambda2: l2, eta0: e0, eta1: e1, eta2: e2 })
}

/// `λ1, λ2, η0, η1, η2` at `q`; uses the specialized forms when `C1 = C2`.
///
/// `η0` is checked against `1 - η1 - η2`, relative to the size of the
/// summands.
pub fn lambdas_etas(d: &DerivedData, q: f64) -> Result<InteriorScalars> {
    if d.equal_confidence() {
        assemble(d, q, lambdas_equal_c(d, q)?, etas_equal_c(d, q)?)
    } else {
        lambdas_etas_general(d, q)
    }
}

/// General-formula route, valid for any `C1 ≤ C2`.
pub fn lambdas_etas_general(d: &DerivedData, q: f64) -> Result<InteriorScalars> {
    assemble(d, q, lambdas(d, q)?, etas_general(d, q)?)
}

/// `(q_i + ‖q v0 - q_i v_i‖, q v0 - q_i v_i)` for `i ∈ {1, 2}`.
fn two_element_score(d: &DerivedData, q: f64, i: usize) -> (f64, BlochVector) {
    let (qi, vi) = d.weighted_state(i);
    let diff = d.v0 * q - vi * qi;
    (qi + diff.norm(), diff)
}

/// Conclusive outcome kept by the two-element branch; ties go to 2.
pub fn two_element_index(d: &DerivedData, q: f64) -> usize {
    let (s1, _) = two_element_score(d, q, 1);
    let (s2, _) = two_element_score(d, q, 2);
    if s1 > s2 + d.tol.branch {
        1
    } else {
        2
    }
}

fn all_nonzero_scalars(d: &DerivedData, q: f64) -> Option<InteriorScalars> {
    // λ first: outside its sign region the η formulas may have no real value.
    let (l1, l2) = if d.equal_confidence() { lambdas_equal_c(d, q) } else { lambdas(d, q) }.ok()?;
    let b = d.tol.branch;
    if l1 < -b || l2 < -b {
        return None;
    }
    let s = lambdas_etas(d, q).ok()?;
    (s.eta0 > b && s.eta1 > b && s.eta2 > b).then_some(s)
}

pub fn classify_branch(d: &DerivedData, q: f64) -> Branch {
    if d.rho12_vanishes() {
        return Branch::Diagonal;
    }
    if all_nonzero_scalars(d, q).is_some() {
        return Branch::AllNonzero;
    }
    match two_element_index(d, q) {
        1 => Branch::TwoElementX1,
        _ => Branch::TwoElementX2,
    }
}

/// `P_I(q)` alone, without building the measurement.
pub fn failure_probability(d: &DerivedData, q: f64) -> Result<f64> {
    match classify_branch(d, q) {
        Branch::AllNonzero => Ok(lambdas_etas(d, q)?.eta0),
        Branch::Diagonal => Ok(d.rho11),
        Branch::TwoElementX1 | Branch::TwoElementX2 => {
            let x = two_element_index(d, q);
            let (_, diff) = two_element_score(d, q, x);
            let n = diff * (1.0 / diff.norm());
            Ok(0.5 * (1.0 + n.dot(d.v0)))
        }
    }
}

/// Optimal measurement of the modified problem at an interior degree `q`.
pub fn interior_eval(d: &DerivedData, q: f64) -> Result<InteriorEval> {
    let lo = q0_lower(d).q0;
    let hi = q0_upper(d).q0;
    let slack = d.tol.interval;
    if q < lo - slack || q > hi + slack {
        return Err(Error::QOutOfInterval { q, lo, hi });
    }
    let branch = classify_branch(d, q);
    let scalars = if branch == Branch::Diagonal { None } else { lambdas_etas(d, q).ok() };

    let (bar_povm, k_bar) = match branch {
        Branch::AllNonzero => all_nonzero_povm(d, q, scalars.as_ref().unwrap())?,
        Branch::Diagonal => diagonal_povm(d, q)?,
        Branch::TwoElementX1 | Branch::TwoElementX2 => {
            let x = if branch == Branch::TwoElementX1 { 1 } else { 2 };
            let must_drop_first = d.c1_at_most_half() || q > d.c1 + d.tol.degeneracy;
            if must_drop_first && x == 1 {
                return Err(Error::Inconsistent(format!("outcome 2 dropped at q = {q} where outcome 1 must vanish")));
            }
            two_element_povm(d, q, x)?
        }
    };
    let povm = bar_povm.map(|m| d.unbar(m));
    let p_i = bar_povm.elements[0].trace();
    let p_bar = crate::boundary::modified_value(d, q, &bar_povm);
    Ok(InteriorEval { q, branch, scalars, p_i, p_bar, bar_povm, povm, k_bar })
}

fn all_nonzero_povm(d: &DerivedData, q: f64, s: &InteriorScalars) -> Result<(Povm, HermitianOp)> {
    let root = (s.lambda1.max(0.0) * s.lambda2.max(0.0)).sqrt();
    let tau12: Complex64 = -d.rho12_phase() * root;
    let tau0 = d.in_nu_basis(&HermitianOp::new(s.lambda1, s.lambda2, tau12));
    let k_bar = HermitianOp::scaled_identity(q) + tau0;
    let etas = [s.eta0, s.eta1, s.eta2];
    let mut elems = [HermitianOp::ZERO; 3];
    for (i, m) in elems.iter_mut().enumerate() {
        let tau = k_bar - d.barrho(i, q);
        let t = tau.trace();
        if !(t > d.tol.sing) {
            return Err(Error::DomainError { q, reason: "dual slack vanishes on the all-nonzero branch" });
        }
        // Rank-one τ̄_i: the complementary projector is I - τ̄_i / tr τ̄_i.
        *m = (HermitianOp::IDENTITY - tau * (1.0 / t)) * etas[i];
    }
    Ok((Povm { elements: elems }, k_bar))
}

fn two_element_povm(d: &DerivedData, q: f64, x: usize) -> Result<(Povm, HermitianOp)> {
    let (_, diff) = two_element_score(d, q, x);
    let norm = diff.norm();
    if !(norm > d.tol.sing) {
        return Err(Error::DomainError { q, reason: "q ρ0 and q_x ρ_x coincide" });
    }
    let n = diff * (1.0 / norm);
    let m0 = from_bloch(n, 1.0);
    let mx = from_bloch(-n, 1.0);
    let mut plain = [m0, HermitianOp::ZERO, HermitianOp::ZERO];
    plain[x] = mx;
    let ens = &d.ensemble;
    let wx = if x == 1 { ens.rho1 * ens.q1 } else { ens.rho2 * ens.q2 };
    let w0 = d.rho0 * q;
    let k = (w0 + wx + (w0 - wx).abs()) * 0.5;
    Ok((Povm { elements: plain }.map(|m| d.bar(m)), d.unbar(&k)))
}

fn diagonal_povm(d: &DerivedData, q: f64) -> Result<(Povm, HermitianOp)> {
    if d.equal_confidence() {
        return Err(Error::NotApplicable("equal confidences with vanishing ρ12 have no interior".into()));
    }
    let m0 = d.in_nu_basis(&HermitianOp::diag(d.rho11, 0.0));
    let m2 = d.in_nu_basis(&HermitianOp::diag(0.0, d.rho22));
    let k_bar = d.in_nu_basis(&HermitianOp::diag(q, d.c2));
    Ok((Povm::new(m0, HermitianOp::ZERO, m2), k_bar))
}

/// Degree at which the all-nonzero branch gives way to a two-element branch,
/// when both occur strictly between the special degrees. Located by
/// bisection on the branch label to within adjacent floats.
pub fn branch_transition(d: &DerivedData) -> Option<f64> {
    if d.rho12_vanishes() {
        return None;
    }
    let (lo, hi) = (q0_lower(d).q0, q0_upper(d).q0);
    let pad = 1e-12 * (hi - lo).max(f64::MIN_POSITIVE);
    let (mut a, mut b) = (lo + pad, hi - pad);
    let full = |q: f64| classify_branch(d, q) == Branch::AllNonzero;
    if !(a < b && full(a) && !full(b)) {
        return None;
    }
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Some(mid);
        }
        if full(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{derive, TwoStateEnsemble};

    fn demo() -> DerivedData {
        derive(&TwoStateEnsemble::demo()).unwrap()
    }

    fn check_eval(d: &DerivedData, ev: &InteriorEval) {
        assert!(ev.bar_povm.completeness_residual(&d.rho0) < 1e-10);
        assert!(ev.povm.completeness_residual(&HermitianOp::IDENTITY) < 1e-10);
        for m in ev.bar_povm.elements {
            assert!(m.min_eigenvalue() > -1e-10);
        }
        for i in 0..3 {
            let tau = ev.k_bar - d.barrho(i, ev.q);
            assert!(tau.min_eigenvalue() > -1e-9, "tau{i} = {tau}");
            assert!(tau.trace_product(&ev.bar_povm.elements[i]).abs() < 1e-9);
        }
        assert!((d.rho0.trace_product(&ev.k_bar) - ev.p_bar).abs() < 1e-9);
    }

    #[test]
    fn demo_transition_is_eta1_root() {
        let d = demo();
        let q = branch_transition(&d).unwrap();
        assert!(lambdas_etas(&d, q).unwrap().eta1.abs() < 1e-9);
        assert!((q - 0.7902).abs() < 1e-3);
        assert_eq!(classify_branch(&d, q + 1e-6), Branch::TwoElementX2);
    }

    #[test]
    fn demo_all_nonzero_at_072() {
        let d = demo();
        let ev = interior_eval(&d, 0.72).unwrap();
        assert_eq!(ev.branch, Branch::AllNonzero);
        let s = ev.scalars.unwrap();
        assert!(s.lambda1 >= 0.0 && s.lambda2 >= 0.0);
        assert!(s.eta0 > 0.0 && s.eta1 > 0.0 && s.eta2 > 0.0);
        assert!((s.eta0 + s.eta1 + s.eta2 - 1.0).abs() < 1e-10);
        assert!((ev.p_i - s.eta0).abs() < 1e-10);
        let traces = ev.bar_povm.traces();
        for (t, e) in traces.iter().zip([s.eta0, s.eta1, s.eta2]) {
            assert!((t - e).abs() < 1e-9);
        }
        let a = d.abs_rho12();
        let pbar = 0.72 + d.rho11 * s.lambda1 + d.rho22 * s.lambda2 - 2.0 * a * (s.lambda1 * s.lambda2).sqrt();
        assert!((ev.p_bar - pbar).abs() < 1e-9);
        check_eval(&d, &ev);
        assert_eq!(classify_branch(&d, 0.70), Branch::AllNonzero);
    }

    #[test]
    fn demo_eta1_sign_change() {
        let d = demo();
        let below = lambdas_etas(&d, 0.7895).unwrap();
        let above = lambdas_etas(&d, 0.7910).unwrap();
        assert!(below.eta1 > 0.0 && above.eta1 <= 0.0);
        assert_eq!(classify_branch(&d, 0.7910), Branch::TwoElementX2);
    }

    #[test]
    fn demo_two_element_at_085() {
        let d = demo();
        let q = 0.85;
        let ev = interior_eval(&d, q).unwrap();
        assert_eq!(ev.branch, Branch::TwoElementX2);
        assert_eq!(ev.povm.elements[1], HermitianOp::ZERO);
        let diff = d.v0 * q - d.v2 * d.q2();
        let pbar = 0.5 * (q + d.q2() + diff.norm());
        assert!((ev.p_bar - pbar).abs() < 1e-12);
        let n = diff * (1.0 / diff.norm());
        assert!((ev.p_i - 0.5 * (1.0 + n.dot(d.v0))).abs() < 1e-12);
        check_eval(&d, &ev);
    }

    #[test]
    fn continuity_at_the_special_degrees() {
        let d = demo();
        let chi = d.chi.unwrap();
        let ev = interior_eval(&d, chi + 1e-6).unwrap();
        assert!(ev.p_i < 1e-3);
        assert!((ev.p_bar - 0.5 * (1.0 + d.l)).abs() < 1e-5);
        let ev = interior_eval(&d, d.c2 - 1e-6).unwrap();
        assert!((ev.p_i - 0.6635).abs() < 1e-3);
    }

    #[test]
    fn failure_probability_matches_eval() {
        let d = demo();
        for q in [0.70, 0.75, 0.79, 0.80, 0.9, 0.96] {
            let ev = interior_eval(&d, q).unwrap();
            assert!((failure_probability(&d, q).unwrap() - ev.p_i).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_degree_outside_interior() {
        let d = demo();
        assert!(matches!(interior_eval(&d, 0.6), Err(Error::QOutOfInterval { .. })));
        assert!(matches!(interior_eval(&d, 0.99), Err(Error::QOutOfInterval { .. })));
    }

    fn equal_c_ensemble() -> DerivedData {
        let rho0 = HermitianOp::new(0.5, 0.5, Complex64::new(0.12, 0.05));
        let nu = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        derive(&TwoStateEnsemble::synthesize(0.85, 0.85, rho0, nu).unwrap()).unwrap()
    }

    #[test]
    fn equal_c_specialized_matches_general() {
        let d = equal_c_ensemble();
        assert!(d.equal_confidence());
        let lo = d.chi.unwrap();
        for k in 1..20 {
            let q = lo + (d.c2 - lo) * k as f64 / 20.0;
            let g = lambdas_etas_general(&d, q).unwrap();
            let s = lambdas_etas(&d, q).unwrap();
            assert!((g.lambda1 - s.lambda1).abs() < 1e-12 && (g.lambda2 - s.lambda2).abs() < 1e-12);
            for (x, y) in [(g.eta0, s.eta0), (g.eta1, s.eta1), (g.eta2, s.eta2)] {
                assert!((x - y).abs() < 1e-10, "{x} vs {y} at q = {q}");
            }
        }
    }

    #[test]
    fn low_confidence_drops_first_outcome() {
        let rho0 = HermitianOp::new(0.45, 0.55, Complex64::new(0.1, 0.1));
        let nu = [Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0)];
        let d = derive(&TwoStateEnsemble::synthesize(0.4, 0.9, rho0, nu).unwrap()).unwrap();
        for k in 1..10 {
            let q = (1.0 - d.c1) + (d.c2 - 1.0 + d.c1) * k as f64 / 10.0;
            let ev = interior_eval(&d, q).unwrap();
            assert_eq!(ev.branch, Branch::TwoElementX2);
            check_eval(&d, &ev);
        }
    }

    #[test]
    fn diagonal_branch() {
        let rho0 = HermitianOp::diag(0.4, 0.6);
        let nu = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let d = derive(&TwoStateEnsemble::synthesize(0.7, 0.9, rho0, nu).unwrap()).unwrap();
        let ev = interior_eval(&d, 0.8).unwrap();
        assert_eq!(ev.branch, Branch::Diagonal);
        assert!((ev.p_i - d.rho11).abs() < 1e-14);
        assert!((ev.p_bar - (0.8 * d.rho11 + d.c2 * d.rho22)).abs() < 1e-12);
        check_eval(&d, &ev);
    }
}
