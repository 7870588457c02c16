use thiserror::Error;

use crate::ideal::PrimeIdeal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid ideal factorization: {0}")]
    InvalidIdeal(String),

    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error("missing splitting data for rational prime {0}")]
    MissingSplitting(u64),

    #[error("missing Satake parameters at {0}")]
    MissingSatake(PrimeIdeal),

    #[error("ideal is ramified: {0} divides a conductor")]
    Ramified(PrimeIdeal),

    #[error("ideal is not squarefree: {0}")]
    NotSquarefree(String),

    #[error("representation data violates an invariant: {0}")]
    InvalidRep(String),

    #[error("character error: {0}")]
    Character(String),

    #[error("not positive semidefinite: {0}")]
    NotPositiveSemidefinite(String),

    #[error("imaginary residue {residue:e} of a real quantity exceeds tolerance ({what})")]
    ImaginaryResidue { what: &'static str, residue: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("power-sum search failed: {0}")]
    PowerSum(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("pole of the L-function at s = 1")]
    Pole,

    #[error("zero scan failed: {0}")]
    Scan(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
