//! Invariant suites. Each one exits 2 when any sample violates its check.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use autosieve::ideal::{FieldSpec, IdealFactorization, PrimeIdeal};
use autosieve::inequalities::rs_gram_form;
use autosieve::rep::{default_theta, AutomorphicRepData};
use autosieve::schur::{h_local_series, rs_local_series, rs_prime_power_coefficient};
use autosieve::zero::explicit::mertens_sum;
use autosieve::zero::turan::turan_search;
use clap::{Args, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::input::RepArgs;
use crate::report::{to_value, CliResult, Report};

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verify {
    /// Euler product against the Schur partition sum of each RS coefficient.
    Cauchy(CauchyArgs),
    /// Positive semidefiniteness of the RS Gram form.
    Prop31(Prop31Args),
    /// The H-series of det-1 GL(2) pairs is 1 - x^2; for GL(1) it is 1.
    Hseries(HseriesArgs),
    /// The Mertens-type bound on the von Mangoldt coefficients.
    Mertens(MertensArgs),
    /// Turán's power-sum search against an exhaustive scan.
    Turan(TuranArgs),
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CauchyArgs {
    /// Degree of the first rep; random in 1..=4 when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Degree of the second rep; random in 1..=4 when omitted.
    #[arg(long)]
    pub nprime: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Prop31Args {
    /// Degree of the first rep; random in 1..=3 when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub nprime: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct HseriesArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct MertensArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub rep: RepArgs,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// Norms up to this bound are summed exactly.
    #[arg(long = "N", default_value_t = 100_000)]
    #[serde(rename = "N")]
    pub n_max: u64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct TuranArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Configurations have between 1 and this many points.
    #[arg(long, default_value_t = 8)]
    pub max_nu: usize,
}

const GRAM_PRIMES: [u64; 3] = [2, 3, 5];

fn unitary(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))).collect()
}

fn table_rep(n: usize, table: BTreeMap<PrimeIdeal, Vec<Complex64>>, theta: f64) -> CliResult<AutomorphicRepData> {
    Ok(AutomorphicRepData::new(
        n,
        FieldSpec::rationals(),
        IdealFactorization::unit(),
        table,
        vec![vec![Complex64::new(0.0, 0.0); n]],
        0,
        theta,
    )?)
}

/// Satake parameters on `|alpha| = p^t`, `t` uniform in `[-theta, theta]`.
fn tempered_rep(rng: &mut ChaCha8Rng, n: usize, theta: f64) -> CliResult<AutomorphicRepData> {
    let table = GRAM_PRIMES
        .iter()
        .map(|&p| {
            let alphas = (0..n)
                .map(|_| {
                    let t = if theta > 0.0 { rng.gen_range(-theta..=theta) } else { 0.0 };
                    Complex64::from_polar((p as f64).powf(t), rng.gen_range(0.0..TAU))
                })
                .collect();
            (PrimeIdeal::rational(p), alphas)
        })
        .collect();
    table_rep(n, table, theta)
}

pub fn run(cmd: &Verify, seed: u64, report: &mut Report) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cmd {
        Verify::Cauchy(a) => cauchy(a, &mut rng, report),
        Verify::Prop31(a) => prop31(a, &mut rng, report),
        Verify::Hseries(a) => hseries(a, &mut rng, report),
        Verify::Mertens(a) => mertens(a, report),
        Verify::Turan(a) => turan(a, &mut rng, report),
    }
}

fn degree_or_random(d: Option<usize>, rng: &mut ChaCha8Rng, max: usize) -> usize {
    d.unwrap_or_else(|| rng.gen_range(1..=max))
}

fn cauchy(a: &CauchyArgs, rng: &mut ChaCha8Rng, report: &mut Report) -> CliResult<()> {
    let mut worst = 0.0f64;
    let mut worst_at = (0, 0);
    for trial in 0..a.trials {
        let n = degree_or_random(a.n, rng, 4);
        let m = degree_or_random(a.nprime, rng, 4);
        let (x, y) = (unitary(rng, n), unitary(rng, m));
        let series = rs_local_series(&x, &y, a.degree);
        for k in 0..=a.degree {
            let dev = (series.coeff(k) - rs_prime_power_coefficient(&x, &y, k as u32)).norm();
            if dev > worst {
                worst = dev;
                worst_at = (trial, k);
            }
        }
    }
    report
        .measured("max_deviation", worst)
        .measured("worst_trial", worst_at.0)
        .measured("worst_degree", worst_at.1)
        .measured("coefficients_compared", a.trials * (a.degree + 1));
    if worst > a.tol {
        report.violation(format!("coefficient deviation {worst:e} exceeds {:e}", a.tol));
    }
    Ok(())
}

/// Decade buckets of `-disc`; positive discriminants above `tol` are violations.
fn disc_bucket(disc: f64, tol: f64) -> &'static str {
    match -disc {
        d if d < -tol => "positive",
        d if d <= tol => "|disc|<=tol",
        d if d <= 1e-6 => "(tol,1e-6]",
        d if d <= 1e-3 => "(1e-6,1e-3]",
        d if d <= 1.0 => "(1e-3,1]",
        d if d <= 1e3 => "(1,1e3]",
        _ => ">1e3",
    }
}

fn prop31(a: &Prop31Args, rng: &mut ChaCha8Rng, report: &mut Report) -> CliResult<()> {
    let mut hist: BTreeMap<&'static str, usize> = BTreeMap::new();
    let (mut max_disc, mut min_a, mut min_c) = (f64::NEG_INFINITY, f64::INFINITY, f64::INFINITY);
    let mut failures = 0usize;
    let mut first_failure = None;
    let mut worst = None;
    for trial in 0..a.trials {
        let n = degree_or_random(a.n, rng, 3);
        let m = degree_or_random(a.nprime, rng, 3);
        let perturb = rng.gen_bool(0.5);
        let ra = tempered_rep(rng, n, if perturb { default_theta(n) } else { 0.0 })?;
        let rb = tempered_rep(rng, m, if perturb { default_theta(m) } else { 0.0 })?;
        let factors = GRAM_PRIMES
            .iter()
            .map(|&p| (PrimeIdeal::rational(p), rng.gen_range(0..=4u32)))
            .filter(|(_, e)| *e > 0)
            .collect();
        let ideal = IdealFactorization::new(factors)?;
        let q = rs_gram_form(&ra, &rb, &ideal)?;
        let disc = q.discriminant();
        *hist.entry(disc_bucket(disc, a.tol)).or_default() += 1;
        if disc > max_disc {
            max_disc = disc;
            worst = Some((trial, n, m, perturb, ideal.to_string(), q));
        }
        min_a = min_a.min(q.a);
        min_c = min_c.min(q.c);
        if disc > a.tol || q.a < -a.tol || q.c < -a.tol {
            failures += 1;
            first_failure.get_or_insert(trial);
        }
    }
    report
        .measured("samples", a.trials)
        .measured("discriminant_histogram", &hist)
        .measured("max_discriminant", max_disc)
        .measured("worst_sample", worst.map(|(trial, n, m, perturbed, ideal, q)| {
            serde_json::json!({"trial": trial, "n": n, "nprime": m, "perturbed": perturbed, "ideal": ideal, "form": q})
        }))
        .measured("min_a", min_a)
        .measured("min_c", min_c)
        .measured("failures", failures);
    if let Some(t) = first_failure {
        report.violation(format!("{failures} forms fail the PSD check; first at trial {t}"));
    }
    Ok(())
}

fn hseries(a: &HseriesArgs, rng: &mut ChaCha8Rng, report: &mut Report) -> CliResult<()> {
    let p = PrimeIdeal::rational(2);
    let det_one = |rng: &mut ChaCha8Rng| {
        let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        table_rep(2, BTreeMap::from([(p.clone(), vec![z, z.inv()])]), 0.0)
    };
    let expected = |k: usize| match k {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    };
    let mut gl2_worst = 0.0f64;
    let mut gl1_exact = true;
    for _ in 0..a.trials {
        let s = h_local_series(&det_one(rng)?, &det_one(rng)?, &p, a.degree)?;
        for k in 0..=a.degree {
            gl2_worst = gl2_worst.max((s.coeff(k) - expected(k)).norm());
        }
        let x = table_rep(1, BTreeMap::from([(p.clone(), unitary(rng, 1))]), 0.0)?;
        let y = table_rep(1, BTreeMap::from([(p.clone(), unitary(rng, 1))]), 0.0)?;
        let s = h_local_series(&x, &y, &p, a.degree)?;
        gl1_exact &= (0..=a.degree).all(|k| s.coeff(k) == Complex64::new(if k == 0 { 1.0 } else { 0.0 }, 0.0));
    }
    report.measured("gl2_max_deviation", gl2_worst).measured("gl1_exact", gl1_exact);
    if gl2_worst > a.tol {
        report.violation(format!("GL(2) H-series deviates by {gl2_worst:e}"));
    }
    if !gl1_exact {
        report.violation("a GL(1) H-series is not exactly 1");
    }
    Ok(())
}

fn mertens(a: &MertensArgs, report: &mut Report) -> CliResult<()> {
    let (rep, label) = a.rep.resolve()?;
    let r = mertens_sum(&rep, a.eta, a.n_max)?;
    report
        .measured("rep", label)
        .absorb(&r, &["rhs", "tail_bound"], &["eta", "n_max"]);
    if !r.termwise_holds {
        report.violation("the pointwise coefficient inequality fails at some prime power");
    }
    if !r.within_slack {
        report.violation(format!("sum {} exceeds 1/eta + n log C plus slack ({})", r.lhs, r.rhs));
    }
    Ok(())
}

/// Feasible `k` in `[K, 2K]` by direct powers of the normalised points.
fn feasible_set(zs: &[Complex64], big_k: usize) -> Vec<usize> {
    let top = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (big_k..=2 * big_k)
        .filter(|&k| {
            let s: Complex64 = zs.iter().map(|z| (z / top).powi(k as i32)).sum();
            s.norm() >= 50f64.powi(-(k as i32))
        })
        .collect()
}

fn turan(a: &TuranArgs, rng: &mut ChaCha8Rng, report: &mut Report) -> CliResult<()> {
    let mut found_offset: BTreeMap<usize, usize> = BTreeMap::new();
    let mut mismatches = 0usize;
    for _ in 0..a.trials {
        let nu = rng.gen_range(1..=a.max_nu.max(1));
        let zs = unitary(rng, nu);
        let oracle = feasible_set(&zs, nu);
        match turan_search(&zs, nu) {
            Ok(k) if oracle.first() == Some(&k) => *found_offset.entry(k - nu).or_default() += 1,
            _ => mismatches += 1,
        }
    }
    report
        .measured("configurations", a.trials)
        .measured("k_minus_K_histogram", to_value(&found_offset))
        .measured("mismatches", mismatches);
    if mismatches > 0 {
        report.violation(format!("{mismatches} configurations disagree with the exhaustive scan"));
    }
    Ok(())
}
