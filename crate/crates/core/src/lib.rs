//! Optimal qubit discrimination with a fixed rate of inconclusive results.
//!
//! Given two qubit hypotheses with priors, [`solver::solve_frir`] returns the
//! three-outcome measurement that maximizes the probability of a correct
//! conclusive answer subject to `tr[ρ0 M0] = Q`, together with its dual
//! certificate.

// `!(x > t)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod tol;
pub mod linalg;
pub mod povm;
pub mod ensemble;
pub mod boundary;
pub mod interior;
pub mod solver;
pub mod verify;

pub use ensemble::{derive, derive_with, unbar_povm, DerivedData, TwoStateEnsemble};
pub use error::{Error, Result};
pub use linalg::{BlochVector, HermitianOp};
pub use povm::Povm;
pub use tol::Tolerances;
