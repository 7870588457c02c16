//! Numerical toolkit for Rankin-Selberg coefficients, Selberg sieve weights,
//! large sieve ratios and power-sum zero detection for automorphic
//! L-functions, with Dirichlet L-functions as the concrete GL(1) case.

pub mod arith;
pub mod character;
pub mod constants;
pub mod error;
pub mod family_file;
pub mod ideal;
pub mod inequalities;
pub mod large_sieve;
pub mod partition;
pub mod quad;
pub mod rep;
pub mod schur;
pub mod series;
pub mod sieve;
pub mod zero;

pub use error::{Error, Result};
