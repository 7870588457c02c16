//! Dirichlet L-functions, zero scanning and the power-sum zero-detection
//! pipeline.

pub mod density;
pub mod explicit;
pub mod gamma;
pub mod lfunc;
pub mod scan;
pub mod test_function;
pub mod turan;

pub use test_function::{laplace_transform, TestFunction};
