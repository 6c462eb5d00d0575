//! Closed-form algebra on 2×2 complex Hermitian operators.
//!
//! Everything here is a pure function of value types. Eigen-decompositions
//! use the trace/discriminant formula rather than an iterative solver, so
//! results are deterministic to the last bit on a given platform.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// A column vector in C².
pub type Ket = [Complex64; 2];

const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

/// ⟨a|b⟩
pub fn inner(a: &Ket, b: &Ket) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn ket_norm(a: &Ket) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr()).sqrt()
}

/// A 2×2 Hermitian operator stored by its independent entries.
///
/// The lower off-diagonal entry is always `conj(a12)`, so Hermiticity holds
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOp {
    pub a11: f64,
    pub a22: f64,
    pub a12: Complex64,
}

/// A real 3-vector parametrizing `½(I + v·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Ordered eigen-decomposition of a [`HermitianOp`].
///
/// Each eigenvector has its first nonzero component real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub eigenvalue_low: f64,
    pub eigenvalue_high: f64,
    pub eigvec_low: Ket,
    pub eigvec_high: Ket,
}

/// Scalar functions that can be lifted to operators through the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFn {
    Sqrt,
    InvSqrt,
    Inv,
    /// Operator absolute value; used for trace norms and Helstrom duals.
    Abs,
}

impl BlochVector {
    pub const ZERO: Self = Self { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Dense 2×2 complex matrix, only used for intermediate products.
#[derive(Clone, Copy)]
struct Mat2([[Complex64; 2]; 2]);

impl Mat2 {
    fn mul(&self, o: &Mat2) -> Mat2 {
        let mut r = [[ZERO_C; 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j];
            }
        }
        Mat2(r)
    }
}

impl HermitianOp {
    pub const ZERO: Self = Self::diag(0.0, 0.0);
    pub const IDENTITY: Self = Self::diag(1.0, 1.0);

    pub const fn new(a11: f64, a22: f64, a12: Complex64) -> Self {
        Self { a11, a22, a12 }
    }

    pub const fn diag(a11: f64, a22: f64) -> Self {
        Self { a11, a22, a12: ZERO_C }
    }

    pub const fn scaled_identity(c: f64) -> Self {
        Self::diag(c, c)
    }

    /// `|k⟩⟨k|`
    pub fn projector(k: &Ket) -> Self {
        Self {
            a11: k[0].norm_sqr(),
            a22: k[1].norm_sqr(),
            a12: k[0] * k[1].conj(),
        }
    }

    /// Builds `Σ c_ij |b_i⟩⟨b_j|` from the coefficient matrix `c` written in
    /// the orthonormal basis `b`.
    pub fn from_basis(c: &HermitianOp, b: &[Ket; 2]) -> Self {
        // U C U† with the basis kets as the columns of U.
        let u = Mat2([[b[0][0], b[1][0]], [b[0][1], b[1][1]]]);
        let ud = Mat2([
            [b[0][0].conj(), b[0][1].conj()],
            [b[1][0].conj(), b[1][1].conj()],
        ]);
        Self::from_mat_hermitian_part(&u.mul(&c.to_mat()).mul(&ud))
    }

    /// Coefficient matrix `⟨b_i|H|b_j⟩` in the orthonormal basis `b`.
    pub fn in_basis(&self, b: &[Ket; 2]) -> HermitianOp {
        HermitianOp {
            a11: self.matrix_element(&b[0], &b[0]).re,
            a22: self.matrix_element(&b[1], &b[1]).re,
            a12: self.matrix_element(&b[0], &b[1]),
        }
    }

    pub fn a21(&self) -> Complex64 {
        self.a12.conj()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match (i, j) {
            (0, 0) => Complex64::new(self.a11, 0.0),
            (1, 1) => Complex64::new(self.a22, 0.0),
            (0, 1) => self.a12,
            (1, 0) => self.a21(),
            _ => panic!("index ({i}, {j}) out of range for a 2x2 operator"),
        }
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12.norm_sqr()
    }

    /// ⟨bra|H|ket⟩
    pub fn matrix_element(&self, bra: &Ket, ket: &Ket) -> Complex64 {
        let h0 = self.a11 * ket[0] + self.a12 * ket[1];
        let h1 = self.a21() * ket[0] + self.a22 * ket[1];
        bra[0].conj() * h0 + bra[1].conj() * h1
    }

    /// tr[self · other], which is real for Hermitian factors.
    pub fn trace_product(&self, other: &HermitianOp) -> f64 {
        self.a11 * other.a11 + self.a22 * other.a22 + 2.0 * (self.a12 * other.a21()).re
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &HermitianOp) -> f64 {
        (self.a11 - other.a11)
            .abs()
            .max((self.a22 - other.a22).abs())
            .max((self.a12 - other.a12).norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&HermitianOp::ZERO)
    }

    pub fn spectral(&self) -> SpectralPair {
        spectral_2x2(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (lo, _) = self.eigenvalues();
        lo
    }

    /// `(low, high)` eigenvalues.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * (self.a11 + self.a22);
        let r = (0.5 * (self.a11 - self.a22)).hypot(self.a12.norm());
        (m - r, m + r)
    }

    pub fn sqrt(&self) -> Result<Self> {
        spectral_fn(self, SpectralFn::Sqrt, &Tolerances::default())
    }

    pub fn inv_sqrt(&self) -> Result<Self> {
        spectral_fn(self, SpectralFn::InvSqrt, &Tolerances::default())
    }

    pub fn inv(&self) -> Result<Self> {
        spectral_fn(self, SpectralFn::Inv, &Tolerances::default())
    }

    pub fn abs(&self) -> Self {
        spectral_fn(self, SpectralFn::Abs, &Tolerances::default())
            .expect("absolute value is defined for every Hermitian operator")
    }

    /// Pauli coefficients `(c0, c)` with `H = c0·I + c·σ`.
    pub fn pauli(&self) -> (f64, BlochVector) {
        (
            0.5 * self.trace(),
            BlochVector::new(self.a12.re, -self.a12.im, 0.5 * (self.a11 - self.a22)),
        )
    }

    fn to_mat(self) -> Mat2 {
        Mat2([[Complex64::new(self.a11, 0.0), self.a12], [self.a21(), Complex64::new(self.a22, 0.0)]])
    }

    /// Hermitian part of a product that is Hermitian up to rounding.
    fn from_mat_hermitian_part(m: &Mat2) -> Self {
        Self {
            a11: m.0[0][0].re,
            a22: m.0[1][1].re,
            a12: 0.5 * (m.0[0][1] + m.0[1][0].conj()),
        }
    }
}

impl Add for HermitianOp {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a11 + o.a11, self.a22 + o.a22, self.a12 + o.a12)
    }
}

impl AddAssign for HermitianOp {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for HermitianOp {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a11 - o.a11, self.a22 - o.a22, self.a12 - o.a12)
    }
}

impl Neg for HermitianOp {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a11, -self.a22, -self.a12)
    }
}

impl Mul<f64> for HermitianOp {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.a11 * s, self.a22 * s, self.a12 * s)
    }
}

impl Mul<HermitianOp> for f64 {
    type Output = HermitianOp;
    fn mul(self, h: HermitianOp) -> HermitianOp {
        h * self
    }
}

impl std::iter::Sum for HermitianOp {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(HermitianOp::ZERO, |acc, h| acc + h)
    }
}

impl fmt::Display for HermitianOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}{:+.6}i], [{:.6}{:+.6}i, {:.6}]]",
            self.a11, self.a12.re, self.a12.im, self.a12.re, -self.a12.im, self.a22
        )
    }
}

/// `weight · ½(I + v·σ)`.
pub fn from_bloch(v: BlochVector, weight: f64) -> HermitianOp {
    let h = 0.5 * weight;
    HermitianOp {
        a11: h * (1.0 + v.z),
        a22: h * (1.0 - v.z),
        a12: Complex64::new(h * v.x, -h * v.y),
    }
}

/// Inverse of [`from_bloch`]: returns the trace and the Bloch vector of the
/// normalized operator. A traceless input yields the zero vector.
pub fn to_bloch(h: &HermitianOp) -> (f64, BlochVector) {
    let t = h.trace();
    if t == 0.0 {
        return (0.0, BlochVector::ZERO);
    }
    let (_, c) = h.pauli();
    (t, c * (2.0 / t))
}

fn fix_phase(v: Ket) -> Ket {
    let lead = if v[0].norm() > 0.0 { v[0] } else { v[1] };
    let n = lead.norm();
    if n == 0.0 {
        return v;
    }
    let phase = lead.conj() / n;
    let mut out = [v[0] * phase, v[1] * phase];
    // The product leaves rounding noise in the leading component's phase.
    let k = if v[0].norm() > 0.0 { 0 } else { 1 };
    out[k] = Complex64::new(n, 0.0);
    out
}

/// Eigen-decomposition by the trace/discriminant formula.
pub fn spectral_2x2(h: &HermitianOp) -> SpectralPair {
    let (lo, hi) = h.eigenvalues();
    let one = Complex64::new(1.0, 0.0);
    if h.a12 == ZERO_C {
        let e1: Ket = [one, ZERO_C];
        let e2: Ket = [ZERO_C, one];
        let (low, high) = if h.a11 > h.a22 { (e2, e1) } else { (e1, e2) };
        return SpectralPair {
            eigenvalue_low: lo,
            eigenvalue_high: hi,
            eigvec_low: low,
            eigvec_high: high,
        };
    }
    let d = 0.5 * (h.a11 - h.a22);
    let r = d.hypot(h.a12.norm());
    // Both candidate null vectors of (H - hi·I); pick the one free of cancellation.
    let v: Ket = if d >= 0.0 {
        [Complex64::new(r + d, 0.0), h.a12.conj()]
    } else {
        [h.a12, Complex64::new(r - d, 0.0)]
    };
    let n = ket_norm(&v);
    let high = [v[0] / n, v[1] / n];
    let low = [-high[1].conj(), high[0].conj()];
    SpectralPair {
        eigenvalue_low: lo,
        eigenvalue_high: hi,
        eigvec_low: fix_phase(low),
        eigvec_high: fix_phase(high),
    }
}

impl SpectralPair {
    pub fn reconstruct(&self) -> HermitianOp {
        HermitianOp::projector(&self.eigvec_low) * self.eigenvalue_low
            + HermitianOp::projector(&self.eigvec_high) * self.eigenvalue_high
    }
}

/// Applies `f` to the spectrum of `h`.
pub fn spectral_fn(h: &HermitianOp, f: SpectralFn, tol: &Tolerances) -> Result<HermitianOp> {
    let s = spectral_2x2(h);
    let (lo, hi) = (s.eigenvalue_low, s.eigenvalue_high);
    let map = |x: f64| -> f64 {
        match f {
            SpectralFn::Sqrt => x.max(0.0).sqrt(),
            SpectralFn::InvSqrt => 1.0 / x.sqrt(),
            SpectralFn::Inv => 1.0 / x,
            SpectralFn::Abs => x.abs(),
        }
    };
    match f {
        SpectralFn::Sqrt if lo < -tol.psd => return Err(Error::NotPsd { min_eigenvalue: lo }),
        SpectralFn::InvSqrt | SpectralFn::Inv if lo < tol.sing => {
            return Err(Error::SingularOperator {
                min_eigenvalue: lo,
                threshold: tol.sing,
            })
        }
        _ => {}
    }
    if h.a12 == ZERO_C {
        return Ok(HermitianOp::diag(map(h.a11), map(h.a22)));
    }
    Ok(HermitianOp::projector(&s.eigvec_low) * map(lo) + HermitianOp::projector(&s.eigvec_high) * map(hi))
}

/// `X · M · X`, Hermitian whenever `X` is.
pub fn congruence(x: &HermitianOp, m: &HermitianOp) -> HermitianOp {
    let xm = x.to_mat();
    HermitianOp::from_mat_hermitian_part(&xm.mul(&m.to_mat()).mul(&xm))
}

pub fn is_psd(h: &HermitianOp, tol: f64) -> bool {
    h.min_eigenvalue() >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bloch_poles_and_center() {
        assert_eq!(from_bloch(BlochVector::new(0.0, 0.0, 1.0), 1.0), HermitianOp::diag(1.0, 0.0));
        assert_eq!(from_bloch(BlochVector::ZERO, 1.0), HermitianOp::diag(0.5, 0.5));
    }

    #[test]
    fn bloch_of_tabulated_states() {
        let rho1 = from_bloch(BlochVector::new(-0.6, -0.2, -0.7), 1.0);
        assert!((rho1.a11 - 0.15).abs() < 1e-15);
        assert!((rho1.a12 - c(-0.30, 0.10)).norm() < 1e-15);

        let rho2 = HermitianOp::new(0.80, 0.20, c(-0.30, 0.05));
        let (t, v) = to_bloch(&rho2);
        assert!((t - 1.0).abs() < 1e-15);
        assert!((v - BlochVector::new(-0.6, -0.1, 0.6)).norm() < 1e-14);
    }

    #[test]
    fn to_bloch_of_basis_states() {
        assert_eq!(to_bloch(&HermitianOp::diag(1.0, 0.0)), (1.0, BlochVector::new(0.0, 0.0, 1.0)));
        assert_eq!(to_bloch(&HermitianOp::diag(0.5, 0.5)), (1.0, BlochVector::ZERO));
    }

    #[test]
    fn spectral_of_diagonal() {
        let s = spectral_2x2(&HermitianOp::diag(3.0, 1.0));
        assert_eq!((s.eigenvalue_low, s.eigenvalue_high), (1.0, 3.0));
        assert_eq!(s.eigvec_low, [c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(s.eigvec_high, [c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn spectral_of_degenerate() {
        let s = spectral_2x2(&HermitianOp::scaled_identity(0.5));
        assert_eq!((s.eigenvalue_low, s.eigenvalue_high), (0.5, 0.5));
        assert!(inner(&s.eigvec_low, &s.eigvec_high).norm() < 1e-15);
    }

    #[test]
    fn spectral_of_pauli_x() {
        let s = spectral_2x2(&HermitianOp::new(0.0, 0.0, c(1.0, 0.0)));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.eigenvalue_low + 1.0).abs() < 1e-15 && (s.eigenvalue_high - 1.0).abs() < 1e-15);
        assert!((s.eigvec_low[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((s.eigvec_low[1] - c(-h, 0.0)).norm() < 1e-15);
        assert!((s.eigvec_high[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((s.eigvec_high[1] - c(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sqrt_and_inv_sqrt_of_diagonal() {
        let h = HermitianOp::diag(4.0, 1.0);
        assert_eq!(h.sqrt().unwrap(), HermitianOp::diag(2.0, 1.0));
        assert_eq!(h.inv_sqrt().unwrap(), HermitianOp::diag(0.5, 1.0));
    }

    #[test]
    fn inv_sqrt_rejects_singular_and_sqrt_rejects_indefinite() {
        assert!(matches!(
            HermitianOp::diag(1.0, 0.0).inv_sqrt(),
            Err(Error::SingularOperator { .. })
        ));
        assert!(matches!(HermitianOp::diag(1.0, -1e-3).sqrt(), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn inv_sqrt_whitens_average_state() {
        let rho1 = from_bloch(BlochVector::new(-0.6, -0.2, -0.7), 1.0);
        let rho2 = from_bloch(BlochVector::new(-0.6, -0.1, 0.6), 1.0);
        let rho0 = rho1 * 0.4 + rho2 * 0.6;
        let w = rho0.inv_sqrt().unwrap();
        assert!(congruence(&w, &rho0).max_abs_diff(&HermitianOp::IDENTITY) < 1e-12);
    }

    #[test]
    fn congruence_basics() {
        let m = HermitianOp::new(0.3, 0.9, c(0.1, -0.2));
        assert_eq!(congruence(&HermitianOp::IDENTITY, &m), m);
        assert_eq!(
            congruence(&HermitianOp::diag(2.0, 1.0), &HermitianOp::IDENTITY),
            HermitianOp::diag(4.0, 1.0)
        );
    }

    #[test]
    fn psd_test() {
        assert!(is_psd(&HermitianOp::diag(1.0, 0.0), 0.0));
        assert!(!is_psd(&HermitianOp::diag(1.0, -1e-6), 1e-9));
    }

    #[test]
    fn basis_round_trip() {
        let s = spectral_2x2(&HermitianOp::new(0.2, 0.7, c(0.3, 0.1)));
        let b = [s.eigvec_low, s.eigvec_high];
        let coeffs = HermitianOp::new(0.4, -0.1, c(0.25, -0.05));
        let h = HermitianOp::from_basis(&coeffs, &b);
        assert!(h.in_basis(&b).max_abs_diff(&coeffs) < 1e-15);
    }

    fn hermitian() -> impl Strategy<Value = HermitianOp> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
            .prop_map(|(a, b, re, im)| HermitianOp::new(a, b, c(re, im)))
    }

    fn psd_with_spectrum(lo: f64, hi: f64) -> impl Strategy<Value = HermitianOp> {
        (lo..hi, lo..hi, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(
            |(l1, l2, theta, phi)| {
                let k: Ket = [c((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)];
                let k_perp: Ket = [-k[1].conj(), k[0].conj()];
                HermitianOp::projector(&k) * l1 + HermitianOp::projector(&k_perp) * l2
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bloch_round_trip(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64, w in 0.01..3.0f64) {
            let v = BlochVector::new(x, y, z);
            let h = from_bloch(v, w);
            let (t, v2) = to_bloch(&h);
            prop_assert!((t - w).abs() <= 1e-14);
            prop_assert!(from_bloch(v2, t).max_abs_diff(&h) <= 1e-14);
        }

        #[test]
        fn spectral_reconstructs(h in hermitian()) {
            let s = spectral_2x2(&h);
            prop_assert!(s.eigenvalue_low <= s.eigenvalue_high);
            prop_assert!(s.reconstruct().max_abs_diff(&h) <= 1e-13);
            prop_assert!(inner(&s.eigvec_low, &s.eigvec_high).norm() <= 1e-12);
            prop_assert!((ket_norm(&s.eigvec_low) - 1.0).abs() <= 1e-12);
            for v in [s.eigvec_low, s.eigvec_high] {
                let lead = if v[0].norm() > 0.0 { v[0] } else { v[1] };
                prop_assert!(lead.im == 0.0 && lead.re > 0.0);
            }
        }

        #[test]
        fn inv_sqrt_whitens(h in psd_with_spectrum(1e-6, 1.0)) {
            let w = h.inv_sqrt().unwrap();
            prop_assert!(congruence(&w, &h).max_abs_diff(&HermitianOp::IDENTITY) <= 1e-11);
            let s = h.sqrt().unwrap();
            prop_assert!(congruence(&s, &HermitianOp::IDENTITY).max_abs_diff(&h) <= 1e-12);
        }

        #[test]
        fn congruence_round_trip(r in psd_with_spectrum(0.05, 1.0), m in psd_with_spectrum(0.0, 1.0)) {
            let back = congruence(&r.sqrt().unwrap(), &congruence(&r.inv_sqrt().unwrap(), &m));
            prop_assert!(back.max_abs_diff(&m) <= 1e-12);
        }

        #[test]
        fn congruence_preserves_psd(x in hermitian(), m in psd_with_spectrum(0.0, 1.0)) {
            let y = congruence(&x, &m);
            let scale = 1.0 + x.max_abs() * x.max_abs();
            prop_assert!(is_psd(&y, 1e-12 * scale));
        }
    }
}
