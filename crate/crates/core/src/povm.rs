use crate::linalg::HermitianOp;

/// Three-outcome measurement `{M0, M1, M2}`; `M0` is the inconclusive outcome.
///
/// The same type carries both the plain elements and their barred
/// counterparts `ρ0^{1/2} M_i ρ0^{1/2}`; which one a value holds is stated by
/// the field or function that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Povm {
    pub elements: [HermitianOp; 3],
}

impl Povm {
    pub fn new(m0: HermitianOp, m1: HermitianOp, m2: HermitianOp) -> Self {
        Self { elements: [m0, m1, m2] }
    }

    pub fn inconclusive(&self) -> &HermitianOp {
        &self.elements[0]
    }

    pub fn sum(&self) -> HermitianOp {
        self.elements.iter().copied().sum()
    }

    pub fn traces(&self) -> [f64; 3] {
        self.elements.map(|m| m.trace())
    }

    pub fn min_eigenvalues(&self) -> [f64; 3] {
        self.elements.map(|m| m.min_eigenvalue())
    }

    /// Exchanges the two conclusive outcomes.
    pub fn swap_conclusive(&self) -> Self {
        Self::new(self.elements[0], self.elements[2], self.elements[1])
    }

    pub fn map(&self, f: impl Fn(&HermitianOp) -> HermitianOp) -> Self {
        Self { elements: self.elements.each_ref().map(f) }
    }

    /// Largest entry-wise deviation of `Σ M_i` from `target`.
    pub fn completeness_residual(&self, target: &HermitianOp) -> f64 {
        self.sum().max_abs_diff(target)
    }
}
