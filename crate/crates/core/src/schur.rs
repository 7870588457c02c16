//! Schur polynomials and the coefficient formulas built on them: Hecke
//! eigenvalues, Rankin-Selberg local series, RS coefficients of ideals and
//! the H-factor series.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ideal::{IdealFactorization, PrimeIdeal};
use crate::partition::{partitions_of, Partition};
use crate::rep::AutomorphicRepData;
use crate::series::PowerSeries;

/// Complete homogeneous symmetric polynomials `h_0..=h_degree`.
pub fn complete_homogeneous(alphas: &[Complex64], degree: usize) -> Vec<Complex64> {
    PowerSeries::euler_inverse(alphas, degree).coefficients().to_vec()
}

/// `s_mu(alphas)` by the Jacobi-Trudi determinant `det[h_{mu_i - i + j}]`.
pub fn schur_eval(mu: &Partition, alphas: &[Complex64]) -> Complex64 {
    let l = mu.length();
    if l > alphas.len() {
        return Complex64::new(0.0, 0.0);
    }
    if l == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let h = complete_homogeneous(alphas, (mu.part(0) as usize) + l - 1);
    schur_from_h(mu, &h)
}

fn schur_from_h(mu: &Partition, h: &[Complex64]) -> Complex64 {
    let l = mu.length();
    if l == 1 {
        return h[mu.part(0) as usize];
    }
    let m = DMatrix::from_fn(l, l, |i, j| {
        let idx = mu.part(i) as i64 - i as i64 + j as i64;
        if idx < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            h[idx as usize]
        }
    });
    m.determinant()
}

/// Schur values of every partition of `k` with at most `max_length` parts,
/// sharing one `h` table.
fn schur_row(k: u32, max_length: usize, alphas: &[Complex64]) -> Vec<(Partition, Complex64)> {
    let parts = partitions_of(k, max_length.min(alphas.len()));
    let h = complete_homogeneous(alphas, 2 * k as usize);
    parts
        .into_iter()
        .map(|mu| {
            let v = if mu.length() == 0 { Complex64::new(1.0, 0.0) } else { schur_from_h(&mu, &h) };
            (mu, v)
        })
        .collect()
}

/// `lambda_pi(n) = prod_p s_{(ord_p n)}(A_pi(p))`.
pub fn hecke_eigenvalue(rep: &AutomorphicRepData, ideal: &IdealFactorization) -> Result<Complex64> {
    let mut value = Complex64::new(1.0, 0.0);
    for (p, e) in ideal.factors() {
        let alphas = rep.satake(p)?;
        value *= complete_homogeneous(&alphas, *e as usize)[*e as usize];
    }
    Ok(value)
}

/// Coefficients of `prod_{j,j'} (1 - A_j B_j' x)^{-1}`.
pub fn rs_local_series(a: &[Complex64], b: &[Complex64], degree: usize) -> PowerSeries {
    PowerSeries::euler_inverse(&pairwise_products(a, b), degree)
}

pub fn pairwise_products(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn check_unramified(rep_a: &AutomorphicRepData, rep_b: &AutomorphicRepData, p: &PrimeIdeal) -> Result<()> {
    if rep_a.is_ramified(p) || rep_b.is_ramified(p) {
        Err(Error::Ramified(p.clone()))
    } else {
        Ok(())
    }
}

/// `lambda_{A x B}(p^k) = sum_{|mu| = k} s_mu(A) s_mu(B)`.
pub fn rs_prime_power_coefficient(a: &[Complex64], b: &[Complex64], k: u32) -> Complex64 {
    let max_len = a.len().min(b.len());
    let sa = schur_row(k, max_len, a);
    let sb = schur_row(k, max_len, b);
    sa.iter().zip(&sb).map(|((_, x), (_, y))| x * y).sum()
}

/// `lambda_{A x B}(n)` as the partition-sequence sum, one factor per prime.
pub fn rs_coefficient_ideal(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    ideal: &IdealFactorization,
) -> Result<Complex64> {
    let mut value = Complex64::new(1.0, 0.0);
    for (p, e) in ideal.factors() {
        check_unramified(rep_a, rep_b, p)?;
        value *= rs_prime_power_coefficient(&rep_a.satake(p)?, &rep_b.satake(p)?, *e);
    }
    Ok(value)
}

/// For each partition sequence of `ideal` (lengths up to `max(n, n')`), the
/// pair `(prod_p s_mu_p(A), prod_p s_mu_p(B))`.
pub fn partition_sequence_terms(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    ideal: &IdealFactorization,
) -> Result<Vec<(Complex64, Complex64)>> {
    let max_len = rep_a.n().max(rep_b.n());
    let mut terms = vec![(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))];
    for (p, e) in ideal.factors() {
        check_unramified(rep_a, rep_b, p)?;
        let a = rep_a.satake(p)?;
        let b = rep_b.satake(p)?;
        let ha = complete_homogeneous(&a, 2 * *e as usize);
        let hb = complete_homogeneous(&b, 2 * *e as usize);
        let local: Vec<(Complex64, Complex64)> = partitions_of(*e, max_len)
            .iter()
            .map(|mu| {
                let sa = if mu.length() > a.len() { Complex64::new(0.0, 0.0) } else { schur_from_h(mu, &ha) };
                let sb = if mu.length() > b.len() { Complex64::new(0.0, 0.0) } else { schur_from_h(mu, &hb) };
                (sa, sb)
            })
            .collect();
        terms = terms
            .iter()
            .flat_map(|(x, y)| local.iter().map(move |(u, v)| (x * u, y * v)))
            .collect();
    }
    Ok(terms)
}

/// `L_p(x, A x B~)^{-1} sum_k lambda_A(p^k) lambda_{B~}(p^k) x^k`.
pub fn h_local_series(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    prime: &PrimeIdeal,
    degree: usize,
) -> Result<PowerSeries> {
    check_unramified(rep_a, rep_b, prime)?;
    let a = rep_a.satake(prime)?;
    let b_dual: Vec<Complex64> = rep_b.satake(prime)?.iter().map(Complex64::conj).collect();
    let pairs = pairwise_products(&a, &b_dual);
    // With a degree-1 side the diagonal series is the RS series itself;
    // expanding it that way lets the product below cancel to exactly 1.
    let diagonal = if a.len() == 1 || b_dual.len() == 1 {
        PowerSeries::euler_inverse(&pairs, degree)
    } else {
        let ha = complete_homogeneous(&a, degree);
        let hb = complete_homogeneous(&b_dual, degree);
        PowerSeries::new(ha.iter().zip(&hb).map(|(x, y)| x * y).collect())
    };
    let factor = PowerSeries::euler_factor(&pairs, degree);
    Ok(&factor * &diagonal)
}
