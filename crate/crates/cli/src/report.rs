//! Serializable summaries and their plain-text rendering.

use std::fmt::{self, Write as _};

use qubit_frir::boundary::{q0_lower, q0_upper, BoundaryCase};
use qubit_frir::interior::{branch_transition, failure_probability};
use qubit_frir::solver::FrirSolution;
use qubit_frir::verify::KktReport;
use qubit_frir::DerivedData;
use serde::Serialize;

use crate::input::MatrixJson;

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub degree: f64,
    /// Failure rates `[lo, hi]` reached on this boundary.
    pub interval: [f64; 2],
    pub regime: String,
}

impl From<BoundaryCase> for BoundaryReport {
    fn from(bc: BoundaryCase) -> Self {
        Self { degree: bc.q0, interval: [bc.interval.lo, bc.interval.hi], regime: bc.regime.to_string() }
    }
}

/// Scalars describing an ensemble, in the internal labelling `C1 ≤ C2`.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub swapped: bool,
    pub c1: f64,
    pub c2: f64,
    pub abs_rho12: f64,
    pub e: f64,
    pub l: f64,
    pub chi: Option<f64>,
    pub lower: BoundaryReport,
    pub upper: BoundaryReport,
    /// Degree and failure rate where a conclusive outcome is first dropped.
    pub transition: Option<[f64; 2]>,
}

impl Analysis {
    pub fn new(d: &DerivedData) -> Self {
        let transition = branch_transition(d).and_then(|q| failure_probability(d, q).ok().map(|p| [q, p]));
        Self {
            swapped: d.swapped,
            c1: d.c1,
            c2: d.c2,
            abs_rho12: d.abs_rho12(),
            e: d.e,
            l: d.l,
            chi: d.chi,
            lower: q0_lower(d).into(),
            upper: q0_upper(d).into(),
            transition,
        }
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "labels swapped     {}", yes_no(self.swapped))?;
        writeln!(f, "C1                 {:.6}", self.c1)?;
        writeln!(f, "C2                 {:.6}", self.c2)?;
        writeln!(f, "|rho12|            {:.6}", self.abs_rho12)?;
        writeln!(f, "e                  {:.6}", self.e)?;
        writeln!(f, "l                  {:.6}", self.l)?;
        match self.chi {
            Some(chi) => writeln!(f, "chi                {chi:.6}")?,
            None => writeln!(f, "chi                n/a")?,
        }
        for (name, b) in [("lower", &self.lower), ("upper", &self.upper)] {
            writeln!(
                f,
                "{name} degree       {:.6}  Q in [{:.6}, {:.6}]  {}",
                b.degree, b.interval[0], b.interval[1], b.regime
            )?;
        }
        if let Some([q, p]) = self.transition {
            writeln!(f, "branch transition  q = {q:.6}  Q = {p:.6}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KktJson {
    pub passed: bool,
    pub tolerance: f64,
    pub worst_residual: f64,
    pub completeness_residual: f64,
    pub duality_gap: f64,
}

impl From<&KktReport> for KktJson {
    fn from(k: &KktReport) -> Self {
        Self {
            passed: k.passed,
            tolerance: k.tolerance,
            worst_residual: k.worst_residual(),
            completeness_residual: k.completeness_residual,
            duality_gap: k.duality_gap,
        }
    }
}

/// A solved instance in the caller's labelling.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub failure_rate: f64,
    pub r_cor: f64,
    pub p_cor: f64,
    pub p_err: f64,
    pub q_used: f64,
    pub regime: String,
    pub unique: bool,
    pub epsilon: Option<f64>,
    pub swapped: bool,
    /// `[M0, M1, M2]`, `M0` inconclusive.
    pub povm: [MatrixJson; 3],
    pub kkt: KktJson,
}

impl From<&FrirSolution> for SolutionReport {
    fn from(s: &FrirSolution) -> Self {
        Self {
            failure_rate: s.failure_rate,
            r_cor: s.r_cor,
            p_cor: s.p_cor,
            p_err: s.p_err(),
            q_used: s.q_used,
            regime: s.regime.to_string(),
            unique: s.unique,
            epsilon: s.epsilon,
            swapped: s.swapped,
            povm: s.povm.elements.each_ref().map(MatrixJson::from_op),
            kkt: (&s.kkt).into(),
        }
    }
}

impl fmt::Display for SolutionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "regime        {}", self.regime)?;
        writeln!(f, "Q             {}", self.failure_rate)?;
        writeln!(f, "R_cor         {:.12}", self.r_cor)?;
        writeln!(f, "P_cor         {:.12}", self.p_cor)?;
        writeln!(f, "P_err         {:.12}", self.p_err)?;
        writeln!(f, "degree        {:.12}", self.q_used)?;
        writeln!(f, "unique        {}", yes_no(self.unique))?;
        if let Some(eps) = self.epsilon {
            writeln!(f, "epsilon       {eps:.12}")?;
        }
        writeln!(
            f,
            "KKT           {} (worst residual {:.1e}, tolerance {:.0e})",
            if self.kkt.passed { "certified" } else { "NOT certified" },
            self.kkt.worst_residual,
            self.kkt.tolerance
        )?;
        for (i, m) in self.povm.iter().enumerate() {
            let label = if i == 0 { "M0 (inconclusive)".to_string() } else { format!("M{i}") };
            writeln!(f, "{label}")?;
            write!(f, "{}", matrix_text(m))?;
        }
        Ok(())
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn complex_text(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{re:>16.12} {sign} {:.12}i", im.abs())
}

fn matrix_text(m: &MatrixJson) -> String {
    let mut out = String::new();
    for i in 0..2 {
        let _ = writeln!(out, "  [ {}   {} ]", complex_text(m.re[i][0], m.im[i][0]), complex_text(m.re[i][1], m.im[i][1]));
    }
    out
}

