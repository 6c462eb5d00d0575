//! Two-state ensembles and the scalars the case analysis runs on.
//!
//! [`derive`] whitens the ensemble by the average state `ρ0 = q1ρ1 + q2ρ2`,
//! reads off the maximum confidences `C1 ≤ C2` with their eigenvectors
//! `ν1, ν2`, and expresses `ρ0` in that basis. Every later module consumes a
//! [`DerivedData`] rather than the raw ensemble.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{congruence, from_bloch, inner, to_bloch, BlochVector, HermitianOp, Ket};
use crate::povm::Povm;
use crate::tol::Tolerances;

const PRIOR_SUM_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const BLOCH_NORM_TOL: f64 = 1e-12;

/// Priors and density operators of the two hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateEnsemble {
    pub q1: f64,
    pub q2: f64,
    pub rho1: HermitianOp,
    pub rho2: HermitianOp,
}

impl TwoStateEnsemble {
    pub fn new(q1: f64, rho1: HermitianOp, q2: f64, rho2: HermitianOp) -> Result<Self> {
        if !(q1 > 0.0 && q2 > 0.0) {
            return Err(Error::InvalidEnsemble(format!("priors must be positive, got q1={q1}, q2={q2}")));
        }
        if (q1 + q2 - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidEnsemble(format!("priors sum to {}, not 1", q1 + q2)));
        }
        for (i, rho) in [(1, &rho1), (2, &rho2)] {
            if (rho.trace() - 1.0).abs() > TRACE_TOL {
                return Err(Error::InvalidEnsemble(format!("rho{i} has trace {}", rho.trace())));
            }
            let lo = rho.min_eigenvalue();
            if lo < -Tolerances::default().psd {
                return Err(Error::InvalidEnsemble(format!("rho{i} has negative eigenvalue {lo:e}")));
            }
        }
        Ok(Self { q1, q2, rho1, rho2 })
    }

    /// Ensemble from the first prior and two Bloch vectors; `q2 = 1 - q1`.
    pub fn from_bloch(q1: f64, v1: BlochVector, v2: BlochVector) -> Result<Self> {
        for (i, v) in [(1, v1), (2, v2)] {
            if v.norm() > 1.0 + BLOCH_NORM_TOL {
                return Err(Error::InvalidEnsemble(format!("Bloch vector {i} has norm {} > 1", v.norm())));
            }
        }
        Self::new(q1, from_bloch(v1, 1.0), 1.0 - q1, from_bloch(v2, 1.0))
    }

    /// Built-in demonstration ensemble: `q1 = 0.4`, `v1 = (-0.6, -0.2, -0.7)`,
    /// `q2 = 0.6`, `v2 = (-0.6, -0.1, 0.6)`.
    pub fn demo() -> Self {
        Self::from_bloch(0.4, BlochVector::new(-0.6, -0.2, -0.7), BlochVector::new(-0.6, -0.1, 0.6))
            .expect("demo ensemble is valid")
    }

    /// Orthogonal pure states `|0⟩, |1⟩` with equal priors.
    pub fn orthogonal() -> Self {
        Self::new(0.5, HermitianOp::diag(1.0, 0.0), 0.5, HermitianOp::diag(0.0, 1.0))
            .expect("orthogonal ensemble is valid")
    }

    /// Same ensemble with the labels 1 and 2 exchanged.
    pub fn swapped(&self) -> Self {
        Self { q1: self.q2, q2: self.q1, rho1: self.rho2, rho2: self.rho1 }
    }

    pub fn rho0(&self) -> HermitianOp {
        self.rho1 * self.q1 + self.rho2 * self.q2
    }

    pub fn bloch_vectors(&self) -> (BlochVector, BlochVector) {
        (to_bloch(&self.rho1).1, to_bloch(&self.rho2).1)
    }

    /// `Σ q_i tr[ρ_i M_i]` over the conclusive outcomes of a plain POVM.
    pub fn success_probability(&self, povm: &Povm) -> f64 {
        self.q1 * self.rho1.trace_product(&povm.elements[1]) + self.q2 * self.rho2.trace_product(&povm.elements[2])
    }

    /// `tr[ρ0 M0]` for a plain POVM.
    pub fn failure_probability(&self, povm: &Povm) -> f64 {
        self.rho0().trace_product(&povm.elements[0])
    }

    /// Ensemble whose whitened states have maximum confidences `c1`, `c2`
    /// along the orthonormal pair `(nu1, ν1⊥)` and whose average state is
    /// `rho0`.
    ///
    /// Every valid ensemble arises this way, which makes it the natural way
    /// to construct instances that sit on a chosen branch of the analysis.
    pub fn synthesize(c1: f64, c2: f64, rho0: HermitianOp, nu1: Ket) -> Result<Self> {
        if !(0.0..=1.0).contains(&c1) || !(0.0..=1.0).contains(&c2) {
            return Err(Error::InvalidArgument(format!("confidences must lie in [0, 1], got {c1}, {c2}")));
        }
        let n = crate::linalg::ket_norm(&nu1);
        let nu1 = [nu1[0] / n, nu1[1] / n];
        let nu2: Ket = [-nu1[1].conj(), nu1[0].conj()];
        let bar1 = HermitianOp::from_basis(&HermitianOp::diag(c1, 1.0 - c2), &[nu1, nu2]);
        let root = rho0.sqrt()?;
        let w1 = congruence(&root, &bar1);
        let w2 = rho0 - w1;
        let (q1, q2) = (w1.trace(), w2.trace());
        if !(q1 > 0.0 && q2 > 0.0) {
            return Err(Error::InvalidArgument("synthesized priors are not positive".into()));
        }
        let s = q1 + q2;
        Self::new(q1 / s, w1 * (1.0 / q1), q2 / s, w2 * (1.0 / q2))
    }
}

/// Whitened ensemble data in the internal labelling where `C1 ≤ C2`.
///
/// All fields refer to the relabelled ensemble; `swapped` records whether
/// the user's labels 1 and 2 were exchanged to get there.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedData {
    pub ensemble: TwoStateEnsemble,
    pub swapped: bool,
    pub tol: Tolerances,

    pub v1: BlochVector,
    pub v2: BlochVector,
    pub v0: BlochVector,

    pub rho0: HermitianOp,
    pub rho0_sqrt: HermitianOp,
    pub rho0_inv_sqrt: HermitianOp,
    pub rho0_inv: HermitianOp,
    pub barrho1: HermitianOp,
    pub barrho2: HermitianOp,

    pub c1: f64,
    pub c2: f64,
    pub nu1: Ket,
    pub nu2: Ket,

    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,

    /// `|q1 - q2|`
    pub e: f64,
    /// `‖q1 v1 - q2 v2‖`
    pub l: f64,
    pub gamma11: f64,
    pub gamma22: f64,
    pub gamma12: Complex64,
    pub chi1: f64,
    pub chi2: f64,
    /// Root of `(χ1 - q)(χ2 - q) = |γ12|²` below `min(χ1, χ2)`; `None` when
    /// the weighted Bloch vectors coincide (`l = 0`).
    pub chi: Option<f64>,
}

pub fn derive(ens: &TwoStateEnsemble) -> Result<DerivedData> {
    derive_with(ens, Tolerances::default())
}

pub fn derive_with(ens: &TwoStateEnsemble, tol: Tolerances) -> Result<DerivedData> {
    let d = derive_labelled(ens, tol, false)?;
    if d.c1 > d.c2 {
        return derive_labelled(&ens.swapped(), tol, true);
    }
    Ok(d)
}

fn derive_labelled(ens: &TwoStateEnsemble, tol: Tolerances, swapped: bool) -> Result<DerivedData> {
    let rho0 = ens.rho0();
    let lo = rho0.min_eigenvalue();
    if lo < tol.sing {
        return Err(Error::SingularRho0 { min_eigenvalue: lo });
    }
    let rho0_sqrt = rho0.sqrt()?;
    let rho0_inv_sqrt = crate::linalg::spectral_fn(&rho0, crate::linalg::SpectralFn::InvSqrt, &tol)?;
    let rho0_inv = crate::linalg::spectral_fn(&rho0, crate::linalg::SpectralFn::Inv, &tol)?;
    let barrho1 = congruence(&rho0_inv_sqrt, &(ens.rho1 * ens.q1));
    let barrho2 = congruence(&rho0_inv_sqrt, &(ens.rho2 * ens.q2));

    let s1 = barrho1.spectral();
    let c1 = s1.eigenvalue_high;
    let c2 = barrho2.eigenvalues().1;
    if c1 + c2 <= 1.0 + tol.degeneracy {
        return Err(Error::DegenerateEnsemble { sum: c1 + c2 });
    }
    // ρ̄2 = I - ρ̄1 shares its eigenbasis; its top vector is ρ̄1's bottom one.
    let nu1 = s1.eigvec_high;
    let nu2 = s1.eigvec_low;

    let rho11 = rho0.matrix_element(&nu1, &nu1).re;
    let rho22 = rho0.matrix_element(&nu2, &nu2).re;
    let rho12 = rho0.matrix_element(&nu1, &nu2);

    let (v1, v2) = ens.bloch_vectors();
    let v0 = v1 * ens.q1 + v2 * ens.q2;
    let e = (ens.q1 - ens.q2).abs();
    let l = (v1 * ens.q1 - v2 * ens.q2).norm();

    let (mut gamma11, mut gamma22, mut gamma12) = (f64::NAN, f64::NAN, Complex64::new(f64::NAN, f64::NAN));
    let (mut chi1, mut chi2, mut chi) = (f64::NAN, f64::NAN, None);
    if l > tol.sing {
        let scale = (l * l - e * e) / (4.0 * l);
        gamma11 = scale * rho0_inv.matrix_element(&nu1, &nu1).re;
        gamma22 = scale * rho0_inv.matrix_element(&nu2, &nu2).re;
        gamma12 = rho0_inv.matrix_element(&nu1, &nu2) * scale;
        chi1 = 0.5 + gamma11 + (2.0 * ens.q1 - 1.0) * (2.0 * c1 - 1.0) / (2.0 * l);
        chi2 = 0.5 + gamma22 + (2.0 * ens.q2 - 1.0) * (2.0 * c2 - 1.0) / (2.0 * l);
        let disc = ((chi1 - chi2).powi(2) + 4.0 * gamma12.norm_sqr()).sqrt();
        chi = Some(0.5 * (chi1 + chi2 - disc));
    }

    Ok(DerivedData {
        ensemble: *ens,
        swapped,
        tol,
        v1,
        v2,
        v0,
        rho0,
        rho0_sqrt,
        rho0_inv_sqrt,
        rho0_inv,
        barrho1,
        barrho2,
        c1,
        c2,
        nu1,
        nu2,
        rho11,
        rho22,
        rho12,
        e,
        l,
        gamma11,
        gamma22,
        gamma12,
        chi1,
        chi2,
        chi,
    })
}

impl DerivedData {
    pub fn q1(&self) -> f64 {
        self.ensemble.q1
    }

    pub fn q2(&self) -> f64 {
        self.ensemble.q2
    }

    pub fn abs_rho12(&self) -> f64 {
        self.rho12.norm()
    }

    /// `ρ11 + |ρ12|²/ρ11`
    pub fn q1_edge(&self) -> f64 {
        self.rho11 + self.rho12.norm_sqr() / self.rho11
    }

    /// `ρ22 + |ρ12|²/ρ22`
    pub fn q2_edge(&self) -> f64 {
        self.rho22 + self.rho12.norm_sqr() / self.rho22
    }

    pub fn rho12_vanishes(&self) -> bool {
        self.abs_rho12() < self.tol.offdiag
    }

    pub fn equal_confidence(&self) -> bool {
        (self.c2 - self.c1).abs() < self.tol.degeneracy
    }

    /// `C1 ≤ 1/2`, with `C1 = 1/2` decided by the degeneracy threshold.
    pub fn c1_at_most_half(&self) -> bool {
        self.c1 <= 0.5 + self.tol.degeneracy
    }

    pub fn c1_is_half(&self) -> bool {
        (self.c1 - 0.5).abs() < self.tol.degeneracy
    }

    /// Whether `χ` is the lower special degree (`C1 > 1/2` and `ρ12 ≠ 0`).
    pub fn chi_applicable(&self) -> bool {
        !self.c1_at_most_half() && !self.rho12_vanishes() && self.chi.is_some()
    }

    pub fn nu_basis(&self) -> [Ket; 2] {
        [self.nu1, self.nu2]
    }

    /// Operator with coefficient matrix `c` in the `(ν1, ν2)` basis.
    pub fn in_nu_basis(&self, c: &HermitianOp) -> HermitianOp {
        HermitianOp::from_basis(c, &self.nu_basis())
    }

    /// `ρ12 / |ρ12|`, or 1 when `ρ12` vanishes.
    pub fn rho12_phase(&self) -> Complex64 {
        let a = self.abs_rho12();
        if a > 0.0 {
            self.rho12 / a
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// `ρ0` written in the `ν` basis (`[[ρ11, ρ12], [ρ21, ρ22]]`).
    pub fn rho0_nu(&self) -> HermitianOp {
        HermitianOp::new(self.rho11, self.rho22, self.rho12)
    }

    /// Prior and Bloch vector of conclusive hypothesis `i ∈ {1, 2}`.
    pub fn weighted_state(&self, i: usize) -> (f64, BlochVector) {
        match i {
            1 => (self.q1(), self.v1),
            2 => (self.q2(), self.v2),
            _ => panic!("conclusive index must be 1 or 2, got {i}"),
        }
    }

    /// Whitened state `ρ̄_i`, with `ρ̄0 = q·I`.
    pub fn barrho(&self, i: usize, q: f64) -> HermitianOp {
        match i {
            0 => HermitianOp::scaled_identity(q),
            1 => self.barrho1,
            2 => self.barrho2,
            _ => panic!("outcome index must be 0, 1 or 2, got {i}"),
        }
    }

    /// `ρ0^{1/2} M ρ0^{1/2}`
    pub fn bar(&self, m: &HermitianOp) -> HermitianOp {
        congruence(&self.rho0_sqrt, m)
    }

    /// `ρ0^{-1/2} M̄ ρ0^{-1/2}`
    pub fn unbar(&self, m: &HermitianOp) -> HermitianOp {
        congruence(&self.rho0_inv_sqrt, m)
    }

    pub fn bar_povm(&self, povm: &Povm) -> Povm {
        povm.map(|m| self.bar(m))
    }

    /// Converts a plain POVM in internal labels to the caller's labels.
    pub fn to_user_labels(&self, povm: &Povm) -> Povm {
        if self.swapped {
            povm.swap_conclusive()
        } else {
            *povm
        }
    }

    /// Orthogonality defect `|⟨ν1|ν2⟩|`.
    pub fn nu_overlap(&self) -> f64 {
        inner(&self.nu1, &self.nu2).norm()
    }
}

/// Maps a barred POVM back to plain measurement operators.
pub fn unbar_povm(d: &DerivedData, bar: &Povm) -> Result<Povm> {
    let residual = bar.completeness_residual(&d.rho0);
    if residual > d.tol.completeness {
        return Err(Error::CompletenessViolation { residual });
    }
    Ok(bar.map(|m| d.unbar(m)))
}
