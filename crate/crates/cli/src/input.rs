//! JSON ensemble files.
//!
//! ```json
//! { "q1": 0.4,
//!   "state1": { "bloch": [-0.6, -0.2, -0.7] },
//!   "state2": { "matrix": { "re": [[0.8, -0.3], [-0.3, 0.2]],
//!                           "im": [[0.0, 0.05], [-0.05, 0.0]] } } }
//! ```
//!
//! `q2` may be given explicitly; it must then equal `1 - q1`.

use std::path::Path;

use num_complex::Complex64;
use qubit_frir::{BlochVector, HermitianOp, Povm, TwoStateEnsemble};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

const PRIOR_SUM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub q1: f64,
    #[serde(default)]
    pub q2: Option<f64>,
    pub state1: StateSpec,
    pub state2: StateSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default)]
    pub bloch: Option<[f64; 3]>,
    #[serde(default)]
    pub matrix: Option<MatrixJson>,
}

/// A 2×2 complex matrix as separate real and imaginary grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub re: [[f64; 2]; 2],
    pub im: [[f64; 2]; 2],
}

impl MatrixJson {
    pub fn from_op(h: &HermitianOp) -> Self {
        let e = |i, j| h.entry(i, j);
        Self {
            re: [[e(0, 0).re, e(0, 1).re], [e(1, 0).re, e(1, 1).re]],
            im: [[e(0, 0).im, e(0, 1).im], [e(1, 0).im, e(1, 1).im]],
        }
    }

    pub fn to_op(self, field: &str) -> CliResult<HermitianOp> {
        let (re, im) = (self.re, self.im);
        let skew = [
            im[0][0].abs(),
            im[1][1].abs(),
            (re[0][1] - re[1][0]).abs(),
            (im[0][1] + im[1][0]).abs(),
        ];
        let worst = skew.into_iter().fold(0.0, f64::max);
        if worst > HERMITIAN_TOL {
            return Err(CliError::Input(format!("{field}: matrix is not Hermitian (deviation {worst:e})")));
        }
        Ok(HermitianOp::new(re[0][0], re[1][1], Complex64::new(re[0][1], im[0][1])))
    }
}

impl StateSpec {
    fn to_op(&self, field: &str) -> CliResult<HermitianOp> {
        match (&self.bloch, &self.matrix) {
            (Some(v), None) => {
                let v = BlochVector::from_array(*v);
                if v.norm() > 1.0 + HERMITIAN_TOL {
                    return Err(CliError::Input(format!("{field}.bloch: norm {} exceeds 1", v.norm())));
                }
                Ok(qubit_frir::linalg::from_bloch(v, 1.0))
            }
            (None, Some(m)) => m.to_op(&format!("{field}.matrix")),
            (Some(_), Some(_)) => Err(CliError::Input(format!("{field}: give either `bloch` or `matrix`, not both"))),
            (None, None) => Err(CliError::Input(format!("{field}: expected a `bloch` or `matrix` entry"))),
        }
    }
}

impl EnsembleFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn to_ensemble(&self) -> CliResult<TwoStateEnsemble> {
        if !(self.q1 > 0.0 && self.q1 < 1.0) {
            return Err(CliError::Input(format!("q1: prior {} must lie in (0, 1)", self.q1)));
        }
        let q2 = 1.0 - self.q1;
        if let Some(given) = self.q2 {
            if (given - q2).abs() > PRIOR_SUM_TOL {
                return Err(CliError::Input(format!("q2: {given} does not equal 1 - q1 = {q2}")));
            }
        }
        let rho1 = self.state1.to_op("state1")?;
        let rho2 = self.state2.to_op("state2")?;
        TwoStateEnsemble::new(self.q1, rho1, q2, rho2).map_err(|e| CliError::Input(e.to_string()))
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Reads and validates an ensemble file; diagnostics are prefixed with the path.
pub fn load_ensemble(path: &Path) -> CliResult<TwoStateEnsemble> {
    let prefix = |e: CliError| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    };
    EnsembleFile::parse(&read(path)?).and_then(|f| f.to_ensemble()).map_err(prefix)
}

/// The parts of a `solve --json` document that `verify --povm` re-checks.
#[derive(Debug, Deserialize)]
pub struct ReportedSolution {
    pub failure_rate: f64,
    pub p_cor: f64,
    pub povm: [MatrixJson; 3],
}

pub fn load_solution(path: &Path) -> CliResult<(ReportedSolution, Povm)> {
    let text = read(path)?;
    let sol: ReportedSolution =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut ops = [HermitianOp::ZERO; 3];
    for (i, m) in sol.povm.iter().enumerate() {
        ops[i] = m.to_op(&format!("{}: povm[{i}]", path.display()))?;
    }
    Ok((sol, Povm { elements: ops }))
}
