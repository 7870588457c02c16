//! Local densities, Selberg sieve weights, smoothed Rankin-Selberg sums and
//! the harmonic partial-sum lower bound.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::ideal::{ideals_up_to, IdealFactorization, PrimeIdeal};
use crate::quad::{KahanComplex, KahanSum};
use crate::rep::AutomorphicRepData;
use crate::schur::{pairwise_products, rs_coefficient_ideal};
use crate::zero::test_function::{laplace_transform, TestFunction};

/// Tolerance on the imaginary part of a density that is real in exact arithmetic.
const DENSITY_IMAG_TOL: f64 = 1e-10;

/// `g_d(s, A x B~) = prod_{p | d} (1 - prod_{i,j} (1 - alpha_i conj(beta_j) N(p)^{-s}))`.
pub fn local_density(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    d: &IdealFactorization,
    s: Complex64,
) -> Result<Complex64> {
    if !d.is_squarefree() {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    let mut g = Complex64::new(1.0, 0.0);
    for p in d.primes() {
        if rep_a.is_ramified(p) || rep_b.is_ramified(p) {
            return Err(Error::Ramified(p.clone()));
        }
        let b_dual: Vec<Complex64> = rep_b.satake(p)?.iter().map(Complex64::conj).collect();
        let x = Complex64::new(p.norm() as f64, 0.0).powc(-s);
        let inverse_factor: Complex64 = pairwise_products(&rep_a.satake(p)?, &b_dual)
            .iter()
            .map(|r| Complex64::new(1.0, 0.0) - r * x)
            .product();
        g *= Complex64::new(1.0, 0.0) - inverse_factor;
    }
    Ok(g)
}

/// `g_pi(p) = g_p(1, pi x pi~)`, real by conjugation symmetry.
pub fn prime_density(rep: &AutomorphicRepData, p: &PrimeIdeal) -> Result<f64> {
    let g = local_density(rep, rep, &IdealFactorization::prime(p.clone()), Complex64::new(1.0, 0.0))?;
    if g.im.abs() > DENSITY_IMAG_TOL {
        return Err(Error::ImaginaryResidue {
            what: "g_pi(p)",
            residue: g.im.abs(),
        });
    }
    Ok(g.re)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveWeights {
    pub z: f64,
    /// Densities of the primes dividing `P(z)`.
    pub densities: Vec<(PrimeIdeal, f64)>,
    /// `D(z)`: squarefree divisors of `P(z)` of norm at most `z`, sorted.
    pub support: Vec<IdealFactorization>,
    pub rho: BTreeMap<IdealFactorization, f64>,
    /// `sum rho(d) rho(d') g([d, d'])` at the solved weights.
    pub diagonal: f64,
    /// `(sum_{d in D(z)} prod_{p | d} g(p) / (1 - g(p)))^{-1}`.
    pub closed_form_diagonal: f64,
    /// Primes of `P(z)` whose density lies outside `(0, 1)`.
    pub flagged: Vec<PrimeIdeal>,
}

impl SieveWeights {
    pub fn rho(&self, d: &IdealFactorization) -> f64 {
        self.rho.get(d).copied().unwrap_or(0.0)
    }

    /// `sum_{d | (n, P(z))} rho(d)`.
    pub fn divisor_sum(&self, n: &IdealFactorization) -> f64 {
        self.support.iter().filter(|d| d.divides(n)).map(|d| self.rho(d)).sum()
    }

    pub fn max_abs_rho(&self) -> f64 {
        self.rho.values().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Selberg weights for `rep` with sifting level `z`. `P(z)` takes the
/// unramified primes of norm below `z` with nonzero density.
pub fn selberg_weights(rep: &AutomorphicRepData, z: f64) -> Result<SieveWeights> {
    if z < 1.0 {
        return Err(Error::Unsupported(format!("sifting level z = {z} < 1")));
    }
    let bound = z.ceil() as u64 - 1;
    let mut densities = Vec::new();
    for p in rep.field().prime_ideals_up_to(bound)? {
        if (p.norm() as f64) >= z || rep.is_ramified(&p) {
            continue;
        }
        let g = prime_density(rep, &p)?;
        if g != 0.0 {
            densities.push((p, g));
        }
    }
    selberg_weights_from_densities(&densities, z)
}

/// Selberg weights for an explicit multiplicative density given on primes.
pub fn selberg_weights_from_densities(densities: &[(PrimeIdeal, f64)], z: f64) -> Result<SieveWeights> {
    let mut densities: Vec<(PrimeIdeal, f64)> = densities.to_vec();
    densities.sort_by(|a, b| a.0.cmp(&b.0));
    let g_of: BTreeMap<PrimeIdeal, f64> = densities.iter().cloned().collect();
    let flagged = densities
        .iter()
        .filter(|(_, g)| !(*g > 0.0 && *g < 1.0))
        .map(|(p, _)| p.clone())
        .collect();

    let support = squarefree_support(&densities, z);
    let g = |d: &IdealFactorization| -> f64 { d.primes().map(|p| g_of[p]).product() };
    let m = support.len();
    let gram = DMatrix::from_fn(m, m, |i, j| g(&support[i].lcm(&support[j])));

    // Row/column 0 is O_F; minimise over the remaining weights with rho(O_F) = 1.
    if gram.clone().cholesky().is_none() {
        return Err(Error::NotPositiveSemidefinite(format!(
            "Gram matrix g([d, d']) on {m} support ideals"
        )));
    }
    let mut rho = vec![1.0];
    let mut diagonal = 1.0;
    if m > 1 {
        let h = gram.view((1, 1), (m - 1, m - 1)).into_owned();
        let b = DVector::from_iterator(m - 1, (1..m).map(|i| gram[(i, 0)]));
        let chol = h
            .cholesky()
            .ok_or_else(|| Error::NotPositiveSemidefinite("reduced Gram matrix".into()))?;
        let r = -chol.solve(&b);
        diagonal = 1.0 + b.dot(&r);
        rho.extend(r.iter());
    }
    let closed: f64 = support
        .iter()
        .map(|d| d.primes().map(|p| g_of[p] / (1.0 - g_of[p])).product::<f64>())
        .sum();
    Ok(SieveWeights {
        z,
        rho: support.iter().cloned().zip(rho).collect(),
        support,
        densities,
        diagonal,
        closed_form_diagonal: 1.0 / closed,
        flagged,
    })
}

fn squarefree_support(densities: &[(PrimeIdeal, f64)], z: f64) -> Vec<IdealFactorization> {
    let mut out = vec![IdealFactorization::unit()];
    for (p, _) in densities {
        let extra: Vec<IdealFactorization> = out
            .iter()
            .filter(|d| (d.norm() * p.norm()) as f64 <= z)
            .map(|d| d.mul(&IdealFactorization::prime(p.clone())))
            .collect();
        out.extend(extra);
    }
    out.sort();
    out
}

/// `phi(q) / q`, the residue of the RS L-function of `chi x chi~` with
/// ramified factors removed.
pub fn character_kappa(rep: &AutomorphicRepData) -> Result<f64> {
    let chi = rep
        .character()
        .ok_or_else(|| Error::Unsupported("kappa is only computed for character reps".into()))?;
    let q = chi.modulus();
    Ok(arith::euler_phi(q) as f64 / q as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothedSumReport {
    pub x: f64,
    pub t: f64,
    pub d: IdealFactorization,
    pub kappa: f64,
    pub direct_sum: Complex64,
    pub main_term: Complex64,
    pub residual: Complex64,
    pub terms: u64,
}

impl SmoothedSumReport {
    pub fn relative_residual(&self) -> f64 {
        self.residual.norm() / self.x
    }
}

/// Terms per block in the parallel direct sum. Fixed so the reduction order
/// never depends on the thread count.
const BLOCK: u64 = 1 << 16;

/// Direct sum `sum_{d | n, (n, q_A q_B) = 1} lambda_{A x B~}(n) phi(T log(N n / x))`
/// against the main term `g_d(1) x phi^(1/T) / T kappa`.
pub fn smoothed_rs_sum(
    rep_a: &AutomorphicRepData,
    rep_b: &AutomorphicRepData,
    d: &IdealFactorization,
    x: f64,
    t: f64,
    phi: &TestFunction,
    kappa: f64,
) -> Result<SmoothedSumReport> {
    if x < 1.0 || t < 1.0 {
        return Err(Error::Unsupported("x and T must be at least 1".into()));
    }
    let g = local_density(rep_a, rep_b, d, Complex64::new(1.0, 0.0))?;
    let (lo, hi) = phi.support();
    let n_lo = (x * (lo / t).exp()).floor().max(0.0) as u64 + 1;
    let n_hi = (x * (hi / t).exp()).ceil() as u64;
    let weight = |n: u64| phi.eval(t * (n as f64 / x).ln());

    let (direct, terms) = match (rep_a.character(), rep_b.character()) {
        (Some(ca), Some(cb)) => {
            let m = d.norm();
            let first = n_lo.div_ceil(m);
            let last = n_hi / m;
            let blocks: Vec<u64> = (first..=last).step_by(BLOCK as usize).collect();
            let partials: Vec<KahanComplex> = blocks
                .par_iter()
                .map(|&start| {
                    let mut acc = KahanComplex::default();
                    for k in start..(start + BLOCK).min(last + 1) {
                        let n = k * m;
                        let lam = ca.value_u(n) * cb.value_u(n).conj();
                        if lam.norm_sqr() != 0.0 {
                            acc.add(lam * weight(n));
                        }
                    }
                    acc
                })
                .collect();
            let mut total = KahanComplex::default();
            for p in &partials {
                total.add(p.value());
            }
            (total.value(), last.saturating_sub(first) + 1)
        }
        _ => {
            let q = rep_a.conductor().mul(rep_b.conductor());
            let b_dual = rep_b.dual();
            let mut acc = KahanComplex::default();
            let mut count = 0;
            for n in ideals_up_to(rep_a.field(), n_hi)? {
                if n.norm() < n_lo || !d.divides(&n) || !n.is_coprime_to(&q) {
                    continue;
                }
                acc.add(rs_coefficient_ideal(rep_a, &b_dual, &n)? * weight(n.norm()));
                count += 1;
            }
            (acc.value(), count)
        }
    };
    let main = g * x * laplace_transform(phi, Complex64::new(1.0 / t, 0.0)) / t * kappa;
    Ok(SmoothedSumReport {
        x,
        t,
        d: d.clone(),
        kappa,
        direct_sum: direct,
        main_term: main,
        residual: direct - main,
        terms,
    })
}

/// `(sum_{N n <= z, (n, q) = 1} lambda_{pi x pi~}(n) / N n, (1 + kappa log z) / 3)`.
pub fn rs_partial_sum_lower(rep: &AutomorphicRepData, z: f64) -> Result<(f64, f64)> {
    let kappa = character_kappa(rep)?;
    let dual = rep.dual();
    let mut lhs = KahanSum::default();
    for n in ideals_up_to(rep.field(), z.floor() as u64)? {
        if !n.is_coprime_to(rep.conductor()) {
            continue;
        }
        let c = rs_coefficient_ideal(rep, &dual, &n)?;
        lhs.add(c.re / n.norm() as f64);
    }
    Ok((lhs.value(), (1.0 + kappa * z.ln()) / 3.0))
}
