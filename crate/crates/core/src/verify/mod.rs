//! Independent checks of solver output.

pub mod kkt;
pub mod lp;
pub mod monte_carlo;
pub mod oracle;
pub mod simplex;

pub use kkt::{check_kkt, check_kkt_with, dual_from_k, KktReport};
pub use lp::{directions, lp_oracle, OracleResult, OracleStatus};
pub use monte_carlo::{monte_carlo, MonteCarloResult};
pub use oracle::{compare_oracle, OracleComparison, OracleRow};
