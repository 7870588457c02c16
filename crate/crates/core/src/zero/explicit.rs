//! Von Mangoldt coefficients and the explicit-formula side of the zero
//! pipeline: the Mertens-type bound, scaled high log-derivatives and the
//! real-part zero-sum identity.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::lfunc::{gamma_factor_logderiv, l_logderiv};
use super::scan::ZeroList;
use crate::arith::primes_up_to;
use crate::character::DirichletCharacter;
use crate::constants::{CalibratedConstant, MERTENS_SLACK, ZERO_SUM_SLACK};
use crate::error::{Error, Result};
use crate::quad::{KahanComplex, KahanSum};
use crate::rep::{analytic_conductor, AutomorphicRepData};

/// Rosser and Schoenfeld: `psi(x) < 1.03883 x` for all `x > 0`.
pub const PSI_RATIO: f64 = 1.03883;

/// Default truncation of the scaled log-derivative series.
pub const DEFAULT_NCAP: u64 = 1 << 24;

/// `Lambda_pi(p^k) = (sum_j alpha_j^k) log Np`, aggregated over ideals of
/// equal norm, on every prime-power norm `<= n_max`.
pub fn lambda_coefficients(rep: &AutomorphicRepData, n_max: u64) -> Result<BTreeMap<u64, Complex64>> {
    let mut out = BTreeMap::new();
    for p in rep.field().prime_ideals_up_to(n_max)? {
        let alpha = rep.satake(&p)?;
        let log_p = (p.norm() as f64).ln();
        let mut powers = alpha.to_vec();
        let mut norm = p.norm();
        loop {
            let trace: Complex64 = powers.iter().sum();
            *out.entry(norm).or_insert(Complex64::new(0.0, 0.0)) += trace * log_p;
            match norm.checked_mul(p.norm()) {
                Some(next) if next <= n_max => norm = next,
                _ => break,
            }
            for (pw, a) in powers.iter_mut().zip(alpha.iter()) {
                *pw *= a;
            }
        }
    }
    Ok(out)
}

/// `Lambda_chi(n) = chi(n) Lambda(n)` for any character, primitive or not.
pub fn character_lambda(chi: &DirichletCharacter, n_max: u64) -> BTreeMap<u64, Complex64> {
    let mut out = BTreeMap::new();
    for p in primes_up_to(n_max) {
        let log_p = (p as f64).ln();
        let mut n = p;
        loop {
            out.insert(n, chi.value_u(n) * log_p);
            match n.checked_mul(p) {
                Some(next) if next <= n_max => n = next,
                _ => break,
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MertensReport {
    pub eta: f64,
    pub n_max: u64,
    /// `sum_{N n <= n_max} |Lambda_pi(n)| / N n^{1 + eta}`.
    pub lhs_truncated: f64,
    /// Bound on the terms beyond `n_max`; `None` when `theta >= eta`.
    pub tail_bound: Option<f64>,
    pub lhs: f64,
    /// `1/eta + n log C(pi)`.
    pub rhs: f64,
    pub slack: CalibratedConstant,
    pub within_slack: bool,
    /// Prime powers where `2|Lambda_pi| <= Lambda_{pi x pi~} + Lambda_F`
    /// was checked.
    pub termwise_checked: usize,
    pub termwise_holds: bool,
}

/// The Mertens-type bound with the pointwise inequality behind it checked
/// term by term.
pub fn mertens_sum(rep: &AutomorphicRepData, eta: f64, n_max: u64) -> Result<MertensReport> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Unsupported(format!("eta = {eta} outside (0, 1]")));
    }
    let mut lhs = KahanSum::default();
    let mut checked = 0;
    let mut holds = true;
    for p in rep.field().prime_ideals_up_to(n_max)? {
        let alpha = rep.satake(&p)?;
        let np = p.norm() as f64;
        let log_p = np.ln();
        let mut powers = alpha.to_vec();
        let mut norm = p.norm();
        loop {
            let trace: Complex64 = powers.iter().sum();
            let lam = trace.norm() * log_p;
            lhs.add(lam / (norm as f64).powf(1.0 + eta));
            // Lambda_{pi x pi~}(p^k) = |sum alpha^k|^2 log Np at unramified p.
            let rs = trace.norm_sqr() * log_p;
            holds &= 2.0 * lam <= rs + log_p + 1e-12 * log_p;
            checked += 1;
            match norm.checked_mul(p.norm()) {
                Some(next) if next <= n_max => norm = next,
                _ => break,
            }
            for (pw, a) in powers.iter_mut().zip(alpha.iter()) {
                *pw *= a;
            }
        }
    }
    let n = rep.n() as f64;
    let tail_bound = (rep.theta() < eta).then(|| {
        let e = eta - rep.theta();
        n * rep.field().degree as f64 * PSI_RATIO * (n_max as f64).powf(-e) * (1.0 + 1.0 / e)
    });
    let lhs_truncated = lhs.value();
    let total = lhs_truncated + tail_bound.unwrap_or(f64::INFINITY);
    let rhs = 1.0 / eta + n * analytic_conductor(rep, 0.0).ln();
    Ok(MertensReport {
        eta,
        n_max,
        lhs_truncated,
        tail_bound,
        lhs: total,
        rhs,
        slack: MERTENS_SLACK,
        within_slack: total <= rhs + MERTENS_SLACK.value,
        termwise_checked: checked,
        termwise_holds: holds,
    })
}

/// `j_k(u) = e^{-u} u^k / k!`.
pub fn j_k(k: usize, u: f64) -> f64 {
    if u <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * u.ln() - u - ln_factorial(k)).exp()
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Bound on `eta sum_{n > x} Lambda(n) j_k(eta log n) / n` from
/// `psi(x) < 1.03883 x`; needs `log x >= k/(1 + eta)` so the summand
/// decreases past `x`.
pub fn certified_tail(k: usize, eta: f64, log_x: f64) -> Result<f64> {
    if log_x < k as f64 / (1.0 + eta) {
        return Err(Error::Unsupported(format!(
            "truncation exp({log_x}) is below the decreasing range for k = {k}"
        )));
    }
    let u = eta * log_x;
    // int_u^inf j_k = e^{-u} sum_{i <= k} u^i / i!
    let upper_gamma: f64 = (0..=k).map(|i| j_k(i, u)).sum();
    Ok(eta * PSI_RATIO * (j_k(k, u) + upper_gamma / eta))
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaledLogDerivReport {
    pub q: u64,
    pub k: usize,
    pub eta: f64,
    pub tau: f64,
    pub big_k: usize,
    /// `log N_0 = K/(300 eta)` and `log N_1 = 40K/eta`.
    pub log_n0: f64,
    pub log_n1: f64,
    pub ncap: u64,
    /// `eta^{k+1}/k! (L'/L)^{(k)}(1 + eta + i tau)`.
    pub value: Complex64,
    /// Prime terms with norm in `[N_0, N_1]`.
    pub window_primes: Complex64,
    /// Prime terms outside the window.
    pub outside_primes: Complex64,
    /// Terms at proper prime powers.
    pub prime_powers: Complex64,
    /// Certified bound on the terms beyond `ncap`.
    pub tail_bound: f64,
    /// `sum |term|` over norms outside the window, with any part beyond
    /// `ncap` replaced by its certified bound.
    pub outside_mass: f64,
    /// `outside_mass * 110^k`.
    pub envelope_ratio: f64,
    /// Whether `1/log(Q T) < eta <= 1/200` holds for `Q = C(chi)`, `T = max(1, |tau|)`.
    pub in_eta_regime: bool,
}

/// The scaled `k`-th derivative of `L'/L(s, chi)` at `s = 1 + eta + i tau`
/// from the absolutely convergent series
/// `(-1)^{k+1} eta sum Lambda_chi(n) n^{-1 - i tau} j_k(eta log n)`.
pub fn scaled_logderiv(
    chi: &DirichletCharacter,
    k: usize,
    eta: f64,
    tau: f64,
    big_k: usize,
    ncap: u64,
) -> Result<ScaledLogDerivReport> {
    if chi.is_trivial() {
        return Err(Error::Pole);
    }
    if !(eta > 0.0 && eta <= 0.5) {
        return Err(Error::Unsupported(format!("eta = {eta} outside (0, 1/2]")));
    }
    if big_k == 0 || ncap < 2 {
        return Err(Error::Unsupported("K and ncap must be positive".into()));
    }
    let log_ncap = (ncap as f64).ln();
    let tail_bound = certified_tail(k, eta, log_ncap)?;
    let log_n0 = big_k as f64 / (300.0 * eta);
    let log_n1 = 40.0 * big_k as f64 / eta;

    #[derive(Default, Clone, Copy)]
    struct Parts {
        window: KahanComplex,
        outside: KahanComplex,
        powers: KahanComplex,
        outside_mass: KahanSum,
    }
    let primes = primes_up_to(ncap);
    let chunk_parts: Vec<Parts> = primes
        .par_chunks(1 << 14)
        .map(|chunk| {
            let mut parts = Parts::default();
            for &p in chunk {
                let log_p = (p as f64).ln();
                let mut n = p;
                let mut first = true;
                loop {
                    let log_n = (n as f64).ln();
                    let weight = eta * log_p * j_k(k, eta * log_n) / n as f64;
                    let term = chi.value_u(n) * Complex64::from_polar(weight, -tau * log_n);
                    let inside = log_n >= log_n0 && log_n <= log_n1;
                    if !inside {
                        parts.outside_mass.add(term.norm());
                    }
                    if !first {
                        parts.powers.add(term);
                    } else if inside {
                        parts.window.add(term);
                    } else {
                        parts.outside.add(term);
                    }
                    first = false;
                    match n.checked_mul(p) {
                        Some(next) if next <= ncap => n = next,
                        _ => break,
                    }
                }
            }
            parts
        })
        .collect();
    let mut window = KahanComplex::default();
    let mut outside = KahanComplex::default();
    let mut powers = KahanComplex::default();
    let mut outside_mass = KahanSum::default();
    for part in &chunk_parts {
        window.add(part.window.value());
        outside.add(part.outside.value());
        powers.add(part.powers.value());
        outside_mass.add(part.outside_mass.value());
    }
    // Beyond ncap only the part outside the window counts: everything when
    // ncap < N_0, the range above N_1 otherwise.
    outside_mass.add(if log_ncap < log_n0 {
        tail_bound
    } else {
        certified_tail(k, eta, log_ncap.max(log_n1))?
    });

    let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
    let (window, outside, powers) = (window.value() * sign, outside.value() * sign, powers.value() * sign);
    let conductor = chi.modulus() as f64 * (3.0 + Complex64::new(chi.parity() as f64, tau).norm());
    let log_qt = (conductor * tau.abs().max(1.0)).ln();
    let outside_mass = outside_mass.value();
    Ok(ScaledLogDerivReport {
        q: chi.modulus(),
        k,
        eta,
        tau,
        big_k,
        log_n0,
        log_n1,
        ncap,
        value: window + outside + powers,
        window_primes: window,
        outside_primes: outside,
        prime_powers: powers,
        tail_bound,
        outside_mass,
        envelope_ratio: outside_mass * 110f64.powi(k as i32),
        in_eta_regime: eta > 1.0 / log_qt && eta <= 1.0 / 200.0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroSumReport {
    pub eta: f64,
    pub t: f64,
    pub zeros_used: usize,
    /// `sum Re 1/(s - rho)` over the supplied zeros, `s = 1 + eta + it`.
    pub partial_sum: f64,
    /// `Re(L'/L(s, chi) + L'/L(s, chi_inf)) + log(q)/2`.
    pub analytic_side: f64,
    /// `2 log q + log(2 + |t|) + 2/eta + slack`.
    pub lemma_bound: f64,
    pub slack: CalibratedConstant,
}

/// Both sides of the real-part identity for the zeros of `L(s, chi)`. The
/// partial sum has positive terms, so it can only approach the analytic
/// side from below as the zero list grows.
pub fn zero_sum_identity(chi: &DirichletCharacter, eta: f64, t: f64, zeros: &ZeroList) -> Result<ZeroSumReport> {
    if chi.is_trivial() {
        return Err(Error::Pole);
    }
    if eta <= 0.0 {
        return Err(Error::Unsupported(format!("eta = {eta} must be positive")));
    }
    let s = Complex64::new(1.0 + eta, t);
    let mut partial = KahanSum::default();
    for rho in &zeros.zeros {
        partial.add((s - rho).inv().re);
    }
    // No zeros lie within eta of s, so a circle of radius eta/2 is safe.
    let analytic = (l_logderiv(chi, s, 0.5 * eta)? + gamma_factor_logderiv(chi, s)).re
        + 0.5 * (chi.modulus() as f64).ln();
    let q = chi.modulus() as f64;
    Ok(ZeroSumReport {
        eta,
        t,
        zeros_used: zeros.zeros.len(),
        partial_sum: partial.value(),
        analytic_side: analytic,
        lemma_bound: 2.0 * q.ln() + (2.0 + t.abs()).ln() + 2.0 / eta + ZERO_SUM_SLACK.value,
        slack: ZERO_SUM_SLACK,
    })
}
