//! Optimal discrimination at a fixed failure rate `Q`.
//!
//! [`solve_frir`] decides which special degree or interior degree `q` the
//! rate belongs to, evaluates the modified problem there and converts back
//! through `P_cor = P̄(q) - qQ`.

use std::fmt;

use crate::boundary::{boundary_solution, q0_lower, q0_upper, BoundaryRegime, BoundarySolution};
use crate::ensemble::{derive_with, DerivedData, TwoStateEnsemble};
use crate::error::{Error, Result};
use crate::interior::{failure_probability, interior_eval, Branch, InteriorEval};
use crate::linalg::HermitianOp;
use crate::povm::Povm;
use crate::tol::Tolerances;
use crate::verify::kkt::{check_kkt, dual_from_k, KktReport};

/// Sub-cases of the vanishing-`ρ12` theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalRegime {
    EqualConfidence,
    /// `C1 < C2`, `Q ≤ ρ11`
    BelowRho11,
    /// `C1 < C2`, `Q > ρ11`
    AboveRho11,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Rho12Zero(DiagonalRegime),
    Boundary(BoundaryRegime),
    Interior(Branch),
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rho12Zero(DiagonalRegime::EqualConfidence) => f.write_str("rho12_zero/equal_C"),
            Self::Rho12Zero(DiagonalRegime::BelowRho11) => f.write_str("rho12_zero/Q_le_rho11"),
            Self::Rho12Zero(DiagonalRegime::AboveRho11) => f.write_str("rho12_zero/Q_gt_rho11"),
            Self::Boundary(b) => write!(f, "{}/{b}", b.side()),
            Self::Interior(b) => write!(f, "interior/{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrirSolution {
    /// Requested failure rate `Q`.
    pub failure_rate: f64,
    pub r_cor: f64,
    pub p_cor: f64,
    /// Inconclusive degree of the modified problem that produced the optimum.
    pub q_used: f64,
    /// Optimal value of the modified problem at `q_used`.
    pub p_bar: f64,
    /// Optimal measurement in the caller's labelling.
    pub povm: Povm,
    /// Barred optimal measurement in the internal labelling (`C1 ≤ C2`).
    pub bar_povm: Povm,
    /// Dual operator `K̄` certifying `bar_povm`.
    pub k_bar: HermitianOp,
    pub regime: Regime,
    pub unique: bool,
    /// Family parameter on a boundary, in the internal labelling.
    pub epsilon: Option<f64>,
    pub swapped: bool,
    pub kkt: KktReport,
}

impl FrirSolution {
    pub fn p_err(&self) -> f64 {
        1.0 - self.failure_rate - self.p_cor
    }
}

pub fn solve_frir(ens: &TwoStateEnsemble, q_fail: f64) -> Result<FrirSolution> {
    solve_frir_with(ens, q_fail, None, Tolerances::default())
}

/// Like [`solve_frir`], with an explicit boundary family parameter and
/// tolerances.
///
/// `epsilon` is only accepted where the optimum is a boundary family.
pub fn solve_frir_with(
    ens: &TwoStateEnsemble,
    q_fail: f64,
    epsilon: Option<f64>,
    tol: Tolerances,
) -> Result<FrirSolution> {
    let d = derive_with(ens, tol)?;
    solve_derived(&d, q_fail, epsilon)
}

fn check_rate(q_fail: f64) -> Result<()> {
    if !(0.0..1.0).contains(&q_fail) {
        return Err(Error::QOutOfRange(q_fail));
    }
    Ok(())
}

pub fn solve_derived(d: &DerivedData, q_fail: f64, epsilon: Option<f64>) -> Result<FrirSolution> {
    check_rate(q_fail)?;
    if d.rho12_vanishes() {
        return solve_rho12_zero_derived(d, q_fail, epsilon);
    }
    let slack = d.tol.interval;
    let upper = q0_upper(d);
    if q_fail >= upper.interval.lo - slack {
        let s = boundary_solution(d, &upper, q_fail, epsilon)?;
        return Ok(from_boundary(d, q_fail, s, Regime::Boundary(upper.regime)));
    }
    let lower = q0_lower(d);
    if q_fail <= lower.interval.hi + slack {
        let s = boundary_solution(d, &lower, q_fail, epsilon)?;
        return Ok(from_boundary(d, q_fail, s, Regime::Boundary(lower.regime)));
    }
    if let Some(e) = epsilon {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {e} given but the optimum at Q = {q_fail} is unique"
        )));
    }
    let b = bisect_degree(d, q_fail)?;
    let mut ev = interior_eval(d, b.q)?;
    if !b.converged && (ev.p_i - q_fail).abs() > d.tol.bisection_value {
        ev = blend(d, q_fail, interior_eval(d, b.lo)?, interior_eval(d, b.hi)?);
    }
    let r_cor = (ev.p_bar - ev.q * q_fail) / (1.0 - q_fail);
    Ok(from_interior(d, q_fail, r_cor, ev))
}

/// Convex combination of the optima at the two ends of an exhausted
/// bracket, weighted so that `tr M̄0 = Q`.
///
/// Where `P_I` is steep enough that adjacent representable degrees skip
/// over `Q`, both ends solve the same modified problem to working precision
/// and so does any mixture of their measurements.
fn blend(d: &DerivedData, q_fail: f64, a: InteriorEval, b: InteriorEval) -> InteriorEval {
    let t = if b.p_i > a.p_i { ((b.p_i - q_fail) / (b.p_i - a.p_i)).clamp(0.0, 1.0) } else { 0.5 };
    let mix = |x: &HermitianOp, y: &HermitianOp| *x * t + *y * (1.0 - t);
    let bar_povm = Povm::new(
        mix(&a.bar_povm.elements[0], &b.bar_povm.elements[0]),
        mix(&a.bar_povm.elements[1], &b.bar_povm.elements[1]),
        mix(&a.bar_povm.elements[2], &b.bar_povm.elements[2]),
    );
    let q = t * a.q + (1.0 - t) * b.q;
    InteriorEval {
        q,
        branch: if t >= 0.5 { a.branch } else { b.branch },
        scalars: if t >= 0.5 { a.scalars } else { b.scalars },
        p_i: bar_povm.elements[0].trace(),
        p_bar: crate::boundary::modified_value(d, q, &bar_povm),
        povm: bar_povm.map(|m| d.unbar(m)),
        bar_povm,
        k_bar: mix(&a.k_bar, &b.k_bar),
    }
}

/// Solves an ensemble whose `ρ12` vanishes, where every optimum lies on a
/// boundary family.
pub fn solve_rho12_zero(ens: &TwoStateEnsemble, q_fail: f64) -> Result<FrirSolution> {
    let d = derive_with(ens, Tolerances::default())?;
    if !d.rho12_vanishes() {
        return Err(Error::NotApplicable(format!("|rho12| = {:e} is not zero", d.abs_rho12())));
    }
    check_rate(q_fail)?;
    solve_rho12_zero_derived(&d, q_fail, None)
}

fn solve_rho12_zero_derived(d: &DerivedData, q_fail: f64, epsilon: Option<f64>) -> Result<FrirSolution> {
    // With ρ12 = 0 the upper family at C1 = C2, the lower families for
    // Q ≤ ρ11 and the upper family for Q > ρ11 cover [0, 1) exactly.
    let (bc, sub) = if d.equal_confidence() {
        (q0_upper(d), DiagonalRegime::EqualConfidence)
    } else if q_fail <= d.rho11 {
        (q0_lower(d), DiagonalRegime::BelowRho11)
    } else {
        (q0_upper(d), DiagonalRegime::AboveRho11)
    };
    let s = boundary_solution(d, &bc, q_fail, epsilon)?;
    Ok(from_boundary(d, q_fail, s, Regime::Rho12Zero(sub)))
}

fn certify(d: &DerivedData, q: f64, bar: &Povm, k_bar: &HermitianOp) -> KktReport {
    check_kkt(d, q, bar, &dual_from_k(d, q, k_bar))
}

fn from_boundary(d: &DerivedData, q_fail: f64, s: BoundarySolution, regime: Regime) -> FrirSolution {
    let q = s.case.q0;
    let bar = s.bar_povm;
    FrirSolution {
        failure_rate: q_fail,
        r_cor: s.r_cor,
        p_cor: s.r_cor * (1.0 - q_fail),
        q_used: q,
        p_bar: s.p_bar,
        povm: d.to_user_labels(&bar.map(|m| d.unbar(m))),
        bar_povm: bar,
        k_bar: s.k_bar,
        regime,
        unique: s.unique,
        epsilon: s.epsilon,
        swapped: d.swapped,
        kkt: certify(d, q, &bar, &s.k_bar),
    }
}

fn from_interior(d: &DerivedData, q_fail: f64, r_cor: f64, ev: InteriorEval) -> FrirSolution {
    FrirSolution {
        failure_rate: q_fail,
        r_cor,
        p_cor: r_cor * (1.0 - q_fail),
        q_used: ev.q,
        p_bar: ev.p_bar,
        povm: d.to_user_labels(&ev.povm),
        bar_povm: ev.bar_povm,
        k_bar: ev.k_bar,
        regime: Regime::Interior(ev.branch),
        unique: true,
        epsilon: None,
        swapped: d.swapped,
        kkt: certify(d, ev.q, &ev.bar_povm, &ev.k_bar),
    }
}

/// Inconclusive degree `q` with `P_I(q) = Q`, found by bisection on the
/// monotone map `q ↦ P_I(q)` between the two special degrees.
pub fn invert_failure_probability(d: &DerivedData, q_fail: f64) -> Result<f64> {
    bisect_degree(d, q_fail).map(|b| b.q)
}

/// Final state of the bisection: `P_I(lo) ≤ Q ≤ P_I(hi)` and `q ∈ [lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeBracket {
    pub q: f64,
    pub lo: f64,
    pub hi: f64,
    /// `|P_I(q) - Q| ≤ bisection_value`
    pub converged: bool,
}

pub fn bisect_degree(d: &DerivedData, q_fail: f64) -> Result<DegreeBracket> {
    let (lower, upper) = (q0_lower(d), q0_upper(d));
    let (mut lo, mut hi) = (lower.q0, upper.q0);
    let (p_lo, p_hi) = (lower.interval.hi, upper.interval.lo);
    if !(p_lo < q_fail && q_fail < p_hi) {
        return Err(Error::BracketFailure { target: q_fail, lo: p_lo, hi: p_hi });
    }
    for _ in 0..d.tol.bisection_max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = failure_probability(d, mid)?;
        if (p - q_fail).abs() <= d.tol.bisection_value {
            return Ok(DegreeBracket { q: mid, lo, hi, converged: true });
        }
        if p < q_fail {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= d.tol.bisection_width {
            break;
        }
    }
    if hi - lo <= d.tol.bisection_width.max(f64::EPSILON * hi) {
        return Ok(DegreeBracket { q: 0.5 * (lo + hi), lo, hi, converged: false });
    }
    Err(Error::BracketFailure { target: q_fail, lo: p_lo, hi: p_hi })
}

/// Largest failure rate at which the equal-confidence closed form holds.
pub fn closed_form_limit(d: &DerivedData) -> f64 {
    let a = d.abs_rho12();
    if d.rho11 >= a && d.rho22 >= a {
        2.0 * a
    } else {
        2.0 * (d.rho11 * d.rho22 - a * a) / (1.0 - 2.0 * a)
    }
}

/// `q(Q)` for `C1 = C2 = C`, `ρ12 ≠ 0`.
pub fn closed_form_degree(d: &DerivedData, q_fail: f64) -> f64 {
    let a = d.abs_rho12();
    0.5 + 0.5 * (2.0 * d.c2 - 1.0) * ((1.0 - 2.0 * a) / (1.0 + 2.0 * a - 2.0 * q_fail)).sqrt()
}

/// `P_cor(Q)` for `C1 = C2 = C`, `ρ12 ≠ 0`.
pub fn closed_form_p_cor(d: &DerivedData, q_fail: f64) -> f64 {
    let a = d.abs_rho12();
    0.5 * (1.0 - q_fail) + 0.5 * (2.0 * d.c2 - 1.0) * ((1.0 - 2.0 * a) * (1.0 + 2.0 * a - 2.0 * q_fail)).sqrt()
}

/// Equal-confidence solution from the closed forms for `q(Q)` and
/// `P_cor(Q)`, without bisection.
///
/// The measurement is the interior optimum at the closed-form degree;
/// `p_cor`, `r_cor` and `q_used` come from the closed forms alone.
pub fn closed_form_equal_c(ens: &TwoStateEnsemble, q_fail: f64) -> Result<FrirSolution> {
    let d = derive_with(ens, Tolerances::default())?;
    check_rate(q_fail)?;
    if !d.equal_confidence() {
        return Err(Error::NotApplicable(format!("C1 = {} differs from C2 = {}", d.c1, d.c2)));
    }
    if d.rho12_vanishes() {
        return Err(Error::NotApplicable("rho12 vanishes".into()));
    }
    let limit = closed_form_limit(&d);
    if q_fail > limit + d.tol.interval {
        return Err(Error::NotApplicable(format!("Q = {q_fail} exceeds the closed-form range [0, {limit}]")));
    }
    let q = closed_form_degree(&d, q_fail).min(d.c2);
    let p_cor = closed_form_p_cor(&d, q_fail);
    let r_cor = p_cor / (1.0 - q_fail);
    let lower = q0_lower(&d);
    if q <= lower.q0 + d.tol.interval {
        let s = boundary_solution(&d, &lower, 0.0, None)?;
        let mut sol = from_boundary(&d, q_fail, s, Regime::Boundary(lower.regime));
        (sol.p_cor, sol.r_cor, sol.q_used) = (p_cor, r_cor, q);
        return Ok(sol);
    }
    let ev = if q >= d.c2 - d.tol.interval {
        None
    } else {
        Some(interior_eval(&d, q)?)
    };
    let mut sol = match ev {
        Some(ev) => from_interior(&d, q_fail, r_cor, ev),
        None => {
            let upper = q0_upper(&d);
            from_boundary(&d, q_fail, boundary_solution(&d, &upper, q_fail, None)?, Regime::Boundary(upper.regime))
        }
    };
    (sol.p_cor, sol.r_cor, sol.q_used) = (p_cor, r_cor, q);
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    /// `n` interior inconclusive degrees, evenly spaced strictly between the
    /// two special degrees.
    Degree(usize),
    /// `n` failure rates `k/n`, `k = 0..n`.
    FailureRate(usize),
}

/// One row of a sweep over inconclusive degrees. Scalars that are undefined
/// on the row's branch are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeRow {
    pub q: f64,
    pub p_i: f64,
    pub p_bar: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub failure_rate: f64,
    pub r_cor: f64,
    pub p_cor: f64,
    pub p_err: f64,
    pub q_used: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepTable {
    Degree(Vec<DegreeRow>),
    FailureRate(Vec<RateRow>),
}

pub fn sweep(ens: &TwoStateEnsemble, grid: Grid) -> Result<SweepTable> {
    let d = derive_with(ens, Tolerances::default())?;
    match grid {
        Grid::Degree(n) => sweep_degree(&d, n).map(SweepTable::Degree),
        Grid::FailureRate(n) => sweep_failure_rate(&d, n).map(SweepTable::FailureRate),
    }
}

pub fn sweep_degree(d: &DerivedData, n: usize) -> Result<Vec<DegreeRow>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a sweep needs at least 2 points, got {n}")));
    }
    let (lo, hi) = (q0_lower(d).q0, q0_upper(d).q0);
    if hi - lo <= d.tol.degeneracy {
        return Ok(Vec::new());
    }
    (1..=n)
        .map(|k| {
            let q = lo + (hi - lo) * k as f64 / (n + 1) as f64;
            let ev = interior_eval(d, q)?;
            // λ and η describe the all-nonzero optimum only.
            let s = if ev.branch == Branch::AllNonzero { ev.scalars } else { None };
            let nan = f64::NAN;
            Ok(DegreeRow {
                q,
                p_i: ev.p_i,
                p_bar: ev.p_bar,
                lambda1: s.map_or(nan, |s| s.lambda1),
                lambda2: s.map_or(nan, |s| s.lambda2),
                eta0: s.map_or(nan, |s| s.eta0),
                eta1: s.map_or(nan, |s| s.eta1),
                eta2: s.map_or(nan, |s| s.eta2),
                branch: ev.branch,
            })
        })
        .collect()
}

pub fn sweep_failure_rate(d: &DerivedData, n: usize) -> Result<Vec<RateRow>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a sweep needs at least 2 points, got {n}")));
    }
    (0..n)
        .map(|k| {
            let s = solve_derived(d, k as f64 / n as f64, None)?;
            Ok(RateRow {
                failure_rate: s.failure_rate,
                r_cor: s.r_cor,
                p_cor: s.p_cor,
                p_err: s.p_err(),
                q_used: s.q_used,
                regime: s.regime,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::LowerRegime;
    use crate::ensemble::derive;
    use num_complex::Complex64;

    fn check_solution(ens: &TwoStateEnsemble, s: &FrirSolution) {
        assert!(s.kkt.passed, "{:?} at Q = {}: {:?}", s.regime, s.failure_rate, s.kkt);
        assert!((s.p_cor - s.r_cor * (1.0 - s.failure_rate)).abs() < 1e-12);
        assert!((ens.failure_probability(&s.povm) - s.failure_rate).abs() < 1e-9);
        assert!((ens.success_probability(&s.povm) - s.p_cor).abs() < 1e-9);
        assert!((s.p_bar - s.q_used * s.failure_rate - s.p_cor).abs() < 1e-9);
        assert!(s.povm.completeness_residual(&HermitianOp::IDENTITY) < 1e-9);
    }

    #[test]
    fn demo_regimes() {
        let ens = TwoStateEnsemble::demo();
        let s = solve_frir(&ens, 0.0).unwrap();
        assert_eq!(s.regime, Regime::Boundary(BoundaryRegime::Lower(LowerRegime::Rho12Nonzero)));
        assert!((s.r_cor - 0.82573).abs() < 1e-5);
        assert_eq!(s.povm.elements[0], HermitianOp::ZERO);
        check_solution(&ens, &s);

        let s = solve_frir(&ens, 0.3).unwrap();
        assert_eq!(s.regime, Regime::Interior(Branch::AllNonzero));
        check_solution(&ens, &s);

        let s = solve_frir(&ens, 0.62).unwrap();
        assert_eq!(s.regime, Regime::Interior(Branch::TwoElementX2));
        assert_eq!(s.povm.elements[1], HermitianOp::ZERO);
        check_solution(&ens, &s);

        let s = solve_frir(&ens, 0.8).unwrap();
        assert!((s.r_cor - 0.9657).abs() < 5e-4);
        assert!(s.unique);
        check_solution(&ens, &s);
    }

    #[test]
    fn threshold_inversion() {
        let d = derive(&TwoStateEnsemble::demo()).unwrap();
        let q = invert_failure_probability(&d, 0.5805).unwrap();
        assert!((q - 0.7902).abs() < 1e-3);
        let q = invert_failure_probability(&d, d.q1_edge() - 1e-9).unwrap();
        assert!(d.c2 - q < 1e-4);
        assert!(matches!(invert_failure_probability(&d, 0.9), Err(Error::BracketFailure { .. })));
    }

    #[test]
    fn rejects_bad_rate() {
        let ens = TwoStateEnsemble::demo();
        assert!(matches!(solve_frir(&ens, 1.0), Err(Error::QOutOfRange(_))));
        assert!(matches!(solve_frir(&ens, -0.1), Err(Error::QOutOfRange(_))));
        assert!(matches!(
            solve_frir_with(&ens, 0.3, Some(0.1), Tolerances::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn orthogonal_any_rate() {
        let ens = TwoStateEnsemble::orthogonal();
        for q in [0.0, 0.25, 0.5, 0.99] {
            let s = solve_frir(&ens, q).unwrap();
            assert!((s.r_cor - 1.0).abs() < 1e-15);
            check_solution(&ens, &s);
        }
        let s = solve_rho12_zero(&ens, 0.5).unwrap();
        assert_eq!(s.regime, Regime::Rho12Zero(DiagonalRegime::EqualConfidence));
    }

    fn diagonal(c1: f64, c2: f64) -> TwoStateEnsemble {
        let rho0 = HermitianOp::diag(0.45, 0.55);
        TwoStateEnsemble::synthesize(c1, c2, rho0, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn diagonal_seam_is_continuous() {
        for (c1, c2) in [(0.3, 0.9), (0.5, 0.8), (0.7, 0.9)] {
            let ens = diagonal(c1, c2);
            let d = derive(&ens).unwrap();
            let below = solve_rho12_zero(&ens, d.rho11).unwrap();
            let above = solve_rho12_zero(&ens, d.rho11 + 1e-12).unwrap();
            assert_eq!(below.regime, Regime::Rho12Zero(DiagonalRegime::BelowRho11));
            assert_eq!(above.regime, Regime::Rho12Zero(DiagonalRegime::AboveRho11));
            assert!((below.r_cor - above.r_cor).abs() < 1e-9);
            assert!((below.r_cor - d.c2).abs() < 1e-9);
            for q in [0.0, 0.2, d.rho11, 0.6, 0.9] {
                check_solution(&ens, &solve_frir(&ens, q).unwrap());
            }
        }
    }

    #[test]
    fn diagonal_zero_rate() {
        let ens = diagonal(0.7, 0.9);
        let d = derive(&ens).unwrap();
        let s = solve_frir(&ens, 0.0).unwrap();
        assert!((s.r_cor - (d.c1 + d.rho22 * (d.c2 - d.c1))).abs() < 1e-12);
        let ens = diagonal(0.3, 0.9);
        let d = derive(&ens).unwrap();
        let s = solve_frir(&ens, 0.0).unwrap();
        assert!((s.r_cor - (1.0 - d.c1 + d.rho22 * (d.c1 + d.c2 - 1.0))).abs() < 1e-12);
    }

    fn equal_c(rho11: f64, re: f64, im: f64, c: f64) -> TwoStateEnsemble {
        let rho0 = HermitianOp::new(rho11, 1.0 - rho11, Complex64::new(re, im));
        let nu = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        TwoStateEnsemble::synthesize(c, c, rho0, nu).unwrap()
    }

    #[test]
    fn closed_form_agrees_with_bisection() {
        let ens = equal_c(0.5, 0.15, 0.1, 0.85);
        let d = derive(&ens).unwrap();
        let limit = closed_form_limit(&d);
        assert!((limit - 2.0 * d.abs_rho12()).abs() < 1e-15);
        for k in 0..20 {
            let q = limit * k as f64 / 20.0;
            let a = closed_form_equal_c(&ens, q).unwrap();
            let b = solve_frir(&ens, q).unwrap();
            assert!((a.p_cor - b.p_cor).abs() < 1e-9, "Q = {q}: {} vs {}", a.p_cor, b.p_cor);
            assert!((a.q_used - b.q_used).abs() < 1e-6);
        }
        let at_limit = closed_form_equal_c(&ens, limit).unwrap();
        assert!((at_limit.r_cor - d.c2).abs() < 1e-12);
        assert!(closed_form_equal_c(&ens, limit + 0.01).is_err());
        assert!(closed_form_equal_c(&TwoStateEnsemble::demo(), 0.1).is_err());
    }

    #[test]
    fn sweeps() {
        let ens = TwoStateEnsemble::demo();
        let SweepTable::Degree(rows) = sweep(&ens, Grid::Degree(200)).unwrap() else { panic!() };
        assert_eq!(rows.len(), 200);
        let crossing = rows.windows(2).find(|w| w[0].eta1 > 0.0 && !(w[1].eta1 > 0.0)).unwrap();
        assert!(crossing[0].q < 0.7902 && 0.7902 < crossing[1].q + 1e-3);
        let SweepTable::FailureRate(rows) = sweep(&ens, Grid::FailureRate(100)).unwrap() else { panic!() };
        for w in rows.windows(2) {
            assert!(w[1].r_cor >= w[0].r_cor - 1e-12);
        }
        let SweepTable::FailureRate(rows) = sweep(&TwoStateEnsemble::orthogonal(), Grid::FailureRate(2)).unwrap()
        else {
            panic!()
        };
        assert!(rows.iter().all(|r| (r.r_cor - 1.0).abs() < 1e-15));
    }
}
