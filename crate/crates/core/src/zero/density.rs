//! Zero counts over character families and the subconvexity-bound terms.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::lfunc::l_value;
use super::scan::{scan_zeros, ZeroList, MAX_HEIGHT};
use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::rep::{Family, FamilyMember};

/// Height used for the zero term of the subconvexity bound.
pub const SUBCONVEXITY_HEIGHT: f64 = 6.0;

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub sigma: f64,
    pub t: f64,
    pub members: usize,
    /// `sum_chi N_chi(sigma, T)`.
    pub count: usize,
    /// `10^7 (1 - sigma) log(Q T)`: the envelope `(QT)^{10^7(1 - sigma)}`
    /// as a logarithm, since the power itself overflows.
    pub log_envelope: f64,
    /// Zero lists in family order, for reuse at other `(sigma, T)`.
    #[serde(skip)]
    pub lists: Vec<ZeroList>,
}

/// `log` of `(Q T)^{10^7 (1 - sigma)}` with `n = [F:Q] = 1`.
pub fn log_density_envelope(q_cap: f64, sigma: f64, t: f64) -> f64 {
    1e7 * (1.0 - sigma) * (q_cap * t.max(1.0)).ln()
}

/// Counts from lists already scanned to at least height `t`.
pub fn count_zeros(lists: &[ZeroList], sigma: f64, t: f64) -> usize {
    lists.iter().map(|l| l.count(sigma, t)).sum()
}

/// Scans every member (in parallel) down to `sigma` and counts
/// `beta > sigma, |gamma| <= T`. Trivial characters are skipped.
pub fn zero_density_sum(family: &Family<DirichletCharacter>, sigma: f64, t: f64) -> Result<DensityReport> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::Unsupported(format!("sigma = {sigma} outside [0, 1]")));
    }
    if !(t > 0.0 && t <= MAX_HEIGHT) {
        return Err(Error::Unsupported(format!("T = {t} outside (0, {MAX_HEIGHT}]")));
    }
    let lists = family
        .members()
        .par_iter()
        .filter(|chi| !chi.is_trivial())
        .map(|chi| scan_zeros(chi, t, sigma))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityReport {
        sigma,
        t,
        members: lists.len(),
        count: count_zeros(&lists, sigma, t),
        log_envelope: log_density_envelope(family.q_cap(), sigma, t),
        lists,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SubconvexityReport {
    pub q: u64,
    pub alpha: f64,
    /// `C(chi)`.
    pub conductor: f64,
    /// `(1/4 - alpha/10^9) log C(chi)`.
    pub conductor_term: f64,
    /// `N_chi(1 - alpha, 6)`.
    pub zero_count: usize,
    /// `(alpha/10^7) N_chi(1 - alpha, 6)`.
    pub zero_term: f64,
    /// `2 log |L(3/2, chi)|`.
    pub l_term: f64,
    /// Sum of the three terms; the `O(1)` is omitted.
    pub bound: f64,
    /// `log |L(1/2, chi)|`, for comparison.
    pub measured: f64,
    pub o1_omitted: bool,
}

/// The explicit terms of the bound for `log |L(1/2, chi)|`.
pub fn subconvexity_rhs(chi: &DirichletCharacter, alpha: f64) -> Result<SubconvexityReport> {
    if chi.is_trivial() {
        return Err(Error::Pole);
    }
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::Unsupported(format!("alpha = {alpha} outside [0, 1/2)")));
    }
    let conductor = chi.analytic_conductor_at(0.0);
    let conductor_term = (0.25 - alpha / 1e9) * conductor.ln();
    let zero_count = if alpha == 0.0 {
        0
    } else {
        scan_zeros(chi, SUBCONVEXITY_HEIGHT, 1.0 - alpha)?.count(1.0 - alpha, SUBCONVEXITY_HEIGHT)
    };
    let zero_term = alpha / 1e7 * zero_count as f64;
    let l_term = 2.0 * l_value(chi, Complex64::new(1.5, 0.0))?.norm().ln();
    Ok(SubconvexityReport {
        q: chi.modulus(),
        alpha,
        conductor,
        conductor_term,
        zero_count,
        zero_term,
        l_term,
        bound: conductor_term + zero_term + l_term,
        measured: l_value(chi, Complex64::new(0.5, 0.0))?.norm().ln(),
        o1_omitted: true,
    })
}
