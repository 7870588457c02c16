//! The binary quadratic form behind the Rankin-Selberg coefficient
//! inequality, and both sides of the completed square it comes from.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::IdealFactorization;
use crate::rep::AutomorphicRepData;
use crate::schur::{hecke_eigenvalue, partition_sequence_terms, rs_coefficient_ideal};

/// Largest imaginary part tolerated in a quantity that is real in exact arithmetic.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;

/// `a x^2 + 2 b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticForm {
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - self.a * self.c
    }

    pub fn psd(&self, tol: f64) -> bool {
        self.a >= -tol && self.c >= -tol && self.discriminant() <= tol
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + 2.0 * self.b * x * y + self.c * y * y
    }
}

fn real_part(z: Complex64, what: &'static str) -> Result<f64> {
    let residue = z.im.abs();
    if residue > IMAG_RESIDUE_TOL * (1.0 + z.re.abs()) {
        return Err(Error::ImaginaryResidue { what, residue });
    }
    Ok(z.re)
}

/// The form with
/// `a = lambda_{A x A~}(n) - |lambda_A(n)|^2`,
/// `b = Re(lambda_{A x B}(n) - lambda_A(n) lambda_B(n))`,
/// `c = lambda_{B x B~}(n) - |lambda_B(n)|^2`.
pub fn rs_gram_form(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    ideal: &IdealFactorization,
) -> Result<QuadraticForm> {
    let aa = real_part(rs_coefficient_ideal(rep_a, &rep_a.dual(), ideal)?, "lambda_{A x A~}")?;
    let bb = real_part(rs_coefficient_ideal(rep_b, &rep_b.dual(), ideal)?, "lambda_{B x B~}")?;
    let ab = rs_coefficient_ideal(rep_a, rep_b, ideal)?;
    let (sq_a, sq_b, prod) = eigenvalue_products(rep_a, rep_b, ideal)?;
    Ok(QuadraticForm {
        a: aa - sq_a.re,
        b: (ab - prod).re,
        c: bb - sq_b.re,
    })
}

/// `(|lambda_A(n)|^2, |lambda_B(n)|^2, lambda_A(n) lambda_B(n))`, multiplied
/// out prime by prime in the same order as `rs_coefficient_ideal`. Entries of
/// the form that vanish identically (a GL(1) side, a squarefree ideal) then
/// cancel exactly instead of leaving a rounding residue that a large
/// opposite entry would amplify in the discriminant.
fn eigenvalue_products(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    ideal: &IdealFactorization,
) -> Result<(Complex64, Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let (mut sq_a, mut sq_b, mut prod) = (one, one, one);
    for (p, e) in ideal.factors() {
        let local = IdealFactorization::prime_power(p.clone(), *e);
        let la = hecke_eigenvalue(rep_a, &local)?;
        let lb = hecke_eigenvalue(rep_b, &local)?;
        sq_a *= la * la.conj();
        sq_b *= lb * lb.conj();
        prod *= la * lb;
    }
    Ok((sq_a, sq_b, prod))
}

/// `(|lambda_A x + conj(lambda_B) y|^2, sum over partition sequences of
/// |x prod s(A) + y conj(prod s(B))|^2)`.
pub fn completing_square_sides(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    ideal: &IdealFactorization,
    x: f64,
    y: f64,
) -> Result<(f64, f64)> {
    let lam_a = hecke_eigenvalue(rep_a, ideal)?;
    let lam_b = hecke_eigenvalue(rep_b, ideal)?;
    let lhs = (lam_a * x + lam_b.conj() * y).norm_sqr();
    let rhs = partition_sequence_terms(rep_a, rep_b, ideal)?
        .iter()
        .map(|(sa, sb)| (sa * x + sb.conj() * y).norm_sqr())
        .sum();
    Ok((lhs, rhs))
}
