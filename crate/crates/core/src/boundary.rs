//! The two special inconclusive degrees and the optimal measurements there.
//!
//! The upper degree is always `C2`; the lower one depends on where `C1` sits
//! relative to 1/2 and on whether `ρ12` vanishes. At each degree the set of
//! achievable failure rates is an interval, and inside it the optimum is a
//! known family parametrized by a single real `ε`.
//!
//! All operators here are written in the `(ν1, ν2)` basis first and then
//! mapped back with [`DerivedData::in_nu_basis`].

use std::fmt;

use crate::ensemble::DerivedData;
use crate::error::{Error, Result};
use crate::linalg::{from_bloch, HermitianOp};
use crate::povm::Povm;
use crate::tol::clamped_sqrt;

/// Closed set of failure probabilities `tr[ρ0 M0]` reachable by optimal
/// measurements at a fixed inconclusive degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiInterval {
    pub lo: f64,
    pub hi: f64,
    pub degenerate_point: bool,
}

impl PiInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, degenerate_point: lo == hi }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperRegime {
    C1LtC2,
    /// `C1 = C2`, `ρ11 < |ρ12| ≤ ρ22`
    C1EqC2CaseA,
    /// `C1 = C2`, `ρ22 < |ρ12| ≤ ρ11`
    C1EqC2CaseB,
    /// `C1 = C2`, `|ρ12| ≤ ρ11, ρ22`
    C1EqC2CaseC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerRegime {
    C1LeHalf,
    Rho12Zero,
    Rho12Nonzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryRegime {
    Upper(UpperRegime),
    Lower(LowerRegime),
}

impl BoundaryRegime {
    pub fn side(&self) -> Side {
        match self {
            Self::Upper(_) => Side::Upper,
            Self::Lower(_) => Side::Lower,
        }
    }
}

impl fmt::Display for BoundaryRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Upper(UpperRegime::C1LtC2) => "C1_lt_C2",
            Self::Upper(UpperRegime::C1EqC2CaseA) => "C1_eq_C2_case_a",
            Self::Upper(UpperRegime::C1EqC2CaseB) => "C1_eq_C2_case_b",
            Self::Upper(UpperRegime::C1EqC2CaseC) => "C1_eq_C2_case_c",
            Self::Lower(LowerRegime::C1LeHalf) => "C1_le_half",
            Self::Lower(LowerRegime::Rho12Zero) => "rho12_zero",
            Self::Lower(LowerRegime::Rho12Nonzero) => "rho12_nonzero",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCase {
    pub which: Side,
    pub regime: BoundaryRegime,
    pub q0: f64,
    pub interval: PiInterval,
}

/// Optimal measurement at a boundary degree for one failure rate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySolution {
    pub case: BoundaryCase,
    pub failure_rate: f64,
    pub r_cor: f64,
    /// Optimal value of the modified problem, `P_cor + q0·Q`.
    pub p_bar: f64,
    pub bar_povm: Povm,
    pub unique: bool,
    /// Family parameter actually used; `None` for the `ρ12 ≠ 0` lower regime,
    /// which has no family.
    pub epsilon: Option<f64>,
    /// Dual certificate `K̄` with `K̄ - ρ̄_i ≥ 0` for every outcome.
    pub k_bar: HermitianOp,
}

pub fn q0_upper(d: &DerivedData) -> BoundaryCase {
    let a = d.abs_rho12();
    let (regime, lo) = if !d.equal_confidence() {
        (UpperRegime::C1LtC2, d.q1_edge())
    } else if d.rho11 < a && a <= d.rho22 {
        (UpperRegime::C1EqC2CaseA, d.q1_edge())
    } else if d.rho22 < a && a <= d.rho11 {
        (UpperRegime::C1EqC2CaseB, d.q2_edge())
    } else {
        (UpperRegime::C1EqC2CaseC, 2.0 * a)
    };
    BoundaryCase {
        which: Side::Upper,
        regime: BoundaryRegime::Upper(regime),
        q0: d.c2,
        interval: PiInterval::new(lo, 1.0),
    }
}

pub fn q0_lower(d: &DerivedData) -> BoundaryCase {
    let (regime, q0, interval) = if d.c1_at_most_half() {
        (LowerRegime::C1LeHalf, 1.0 - d.c1, PiInterval::new(0.0, 1.0 - d.q2_edge()))
    } else if d.rho12_vanishes() {
        let hi = if d.equal_confidence() { d.rho11 + d.rho22 } else { d.rho11 };
        (LowerRegime::Rho12Zero, d.c1, PiInterval::new(0.0, hi))
    } else {
        let chi = d.chi.expect("chi exists whenever the weighted Bloch vectors differ");
        (LowerRegime::Rho12Nonzero, chi, PiInterval::point(0.0))
    };
    BoundaryCase {
        which: Side::Lower,
        regime: BoundaryRegime::Lower(regime),
        q0,
        interval,
    }
}

/// Admissible family parameters `[lo, hi]` at failure rate `q_fail`, or
/// `None` for the `ρ12 ≠ 0` lower regime.
fn admissible(d: &DerivedData, bc: &BoundaryCase, q_fail: f64) -> Option<(f64, f64)> {
    let a = d.abs_rho12();
    match bc.regime {
        BoundaryRegime::Upper(UpperRegime::C1LtC2) => Some((d.rho11, d.rho11)),
        BoundaryRegime::Upper(_) => {
            let s = clamped_sqrt((q_fail * q_fail / 4.0 - a * a).max(-d.tol.sqrt_clamp), d.tol.sqrt_clamp);
            let lo = (q_fail - d.rho22).max(q_fail / 2.0 - s);
            let hi = d.rho11.min(q_fail / 2.0 + s);
            Some((lo, hi))
        }
        BoundaryRegime::Lower(LowerRegime::C1LeHalf) => {
            if d.c1_is_half() {
                Some((0.0, (1.0 - d.q2_edge() - q_fail).max(0.0)))
            } else {
                Some((0.0, 0.0))
            }
        }
        BoundaryRegime::Lower(LowerRegime::Rho12Zero) => {
            if d.equal_confidence() {
                Some(((q_fail - d.rho11).max(0.0), d.rho22.min(q_fail)))
            } else {
                Some((0.0, 0.0))
            }
        }
        BoundaryRegime::Lower(LowerRegime::Rho12Nonzero) => None,
    }
}

/// Range of `ε` over which the boundary family is optimal at `q_fail`;
/// `None` when the optimal measurement is unique.
pub fn epsilon_range(d: &DerivedData, bc: &BoundaryCase, q_fail: f64) -> Option<(f64, f64)> {
    admissible(d, bc, q_fail).filter(|(lo, hi)| hi - lo > d.tol.interval)
}

pub fn boundary_solution(
    d: &DerivedData,
    bc: &BoundaryCase,
    q_fail: f64,
    epsilon: Option<f64>,
) -> Result<BoundarySolution> {
    let slack = d.tol.interval;
    if !bc.interval.contains(q_fail, slack) {
        return Err(Error::QOutOfInterval { q: q_fail, lo: bc.interval.lo, hi: bc.interval.hi });
    }
    let big_q = q_fail.clamp(bc.interval.lo, bc.interval.hi);

    let range = admissible(d, bc, big_q);
    let eps = match (range, epsilon) {
        (None, None) => None,
        (None, Some(e)) => return Err(Error::EpsilonOutOfRange { epsilon: e, lo: f64::NAN, hi: f64::NAN }),
        (Some((lo, hi)), None) => Some(0.5 * (lo + hi)),
        (Some((lo, hi)), Some(e)) => {
            if e < lo - slack || e > hi + slack {
                return Err(Error::EpsilonOutOfRange { epsilon: e, lo, hi });
            }
            Some(e.clamp(lo, hi))
        }
    };
    let unique = match range {
        Some((lo, hi)) => hi - lo <= slack,
        None => true,
    };

    let (c1, c2) = (d.c1, d.c2);
    let (r11, r22, r12) = (d.rho11, d.rho22, d.rho12);
    let nu = |c: HermitianOp| d.in_nu_basis(&c);
    let zero = num_complex::Complex64::new(0.0, 0.0);

    let (r_cor, bar_povm, k_bar) = match bc.regime {
        BoundaryRegime::Upper(_) => {
            let e = eps.unwrap();
            let m0 = HermitianOp::new(e, big_q - e, r12);
            let m1 = HermitianOp::diag(r11 - e, 0.0);
            let m2 = HermitianOp::diag(0.0, r22 - big_q + e);
            (c2, Povm::new(nu(m0), nu(m1), nu(m2)), HermitianOp::scaled_identity(c2))
        }
        BoundaryRegime::Lower(LowerRegime::C1LeHalf) => {
            let e = eps.unwrap();
            let m0 = HermitianOp::diag(big_q, 0.0);
            let m1 = HermitianOp::diag(e, 0.0);
            let m2 = HermitianOp::new(r11 - big_q - e, r22, r12);
            let r = 1.0 - c1 + (c1 - d.q1()) / (1.0 - big_q);
            let k = nu(HermitianOp::diag(1.0 - c1, c2));
            (r, Povm::new(nu(m0), nu(m1), nu(m2)), k)
        }
        BoundaryRegime::Lower(LowerRegime::Rho12Zero) => {
            let e = eps.unwrap();
            let m0 = HermitianOp::new(big_q - e, e, zero);
            let m1 = HermitianOp::diag(r11 - big_q + e, 0.0);
            let m2 = HermitianOp::diag(0.0, r22 - e);
            let r = if d.equal_confidence() { c1 } else { c1 + r22 * (c2 - c1) / (1.0 - big_q) };
            let k = nu(HermitianOp::diag(c1, c2));
            (r, Povm::new(nu(m0), nu(m1), nu(m2)), k)
        }
        BoundaryRegime::Lower(LowerRegime::Rho12Nonzero) => {
            let ens = &d.ensemble;
            let diff = d.v1 * ens.q1 - d.v2 * ens.q2;
            let n = diff * (1.0 / d.l);
            let m1 = from_bloch(n, 1.0);
            let m2 = from_bloch(-n, 1.0);
            let k = (d.rho0 + (ens.rho1 * ens.q1 - ens.rho2 * ens.q2).abs()) * 0.5;
            let bar = Povm::new(HermitianOp::ZERO, d.bar(&m1), d.bar(&m2));
            (0.5 * (1.0 + d.l), bar, d.unbar(&k))
        }
    };

    Ok(BoundarySolution {
        case: *bc,
        failure_rate: big_q,
        r_cor,
        p_bar: modified_value(d, bc.q0, &bar_povm),
        bar_povm,
        unique,
        epsilon: eps,
        k_bar,
    })
}

/// Objective of the modified problem, `q·tr M̄0 + Σ tr[ρ̄_i M̄_i]`.
pub fn modified_value(d: &DerivedData, q: f64, bar: &Povm) -> f64 {
    q * bar.elements[0].trace()
        + d.barrho1.trace_product(&bar.elements[1])
        + d.barrho2.trace_product(&bar.elements[2])
}
