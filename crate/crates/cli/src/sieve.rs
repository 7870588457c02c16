use autosieve::character::primitive_characters;
use autosieve::ideal::IdealFactorization;
use autosieve::rep::character_rep;
use autosieve::sieve::{character_kappa, rs_partial_sum_lower, selberg_weights, smoothed_rs_sum};
use autosieve::zero::TestFunction;
use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::input::{CharArgs, RepArgs};
use crate::report::{num, CliResult, Report, Table};

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sieve {
    /// Selberg weights rho(d) for one rep.
    Weights(WeightsArgs),
    /// Smoothed RS sum of a character against its main term.
    Smoothed(SmoothedArgs),
    /// Harmonic partial sums of |chi|^2 against (1 + kappa log z)/3.
    PartialLower(PartialLowerArgs),
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct WeightsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub rep: RepArgs,
    /// Sifting level.
    #[arg(long)]
    pub z: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SmoothedArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chi: CharArgs,
    /// Norm of the squarefree ideal d.
    #[arg(long, default_value_t = 1)]
    pub d: u64,
    #[arg(long)]
    pub x: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    #[serde(rename = "T")]
    pub t: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PartialLowerArgs {
    /// Largest modulus; every primitive character up to it is checked.
    #[arg(long, default_value_t = 20)]
    pub q_max: u64,
    /// Truncation points, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [100.0, 1000.0, 10000.0])]
    pub z: Vec<f64>,
}

pub fn run(cmd: &Sieve, report: &mut Report) -> CliResult<()> {
    match cmd {
        Sieve::Weights(a) => weights(a, report),
        Sieve::Smoothed(a) => smoothed(a, report),
        Sieve::PartialLower(a) => partial_lower(a, report),
    }
}

fn weights(a: &WeightsArgs, report: &mut Report) -> CliResult<()> {
    let (rep, label) = a.rep.resolve()?;
    let w = selberg_weights(&rep, a.z)?;
    let gap = (w.diagonal - w.closed_form_diagonal).abs();
    let unit = w.rho(&IdealFactorization::unit());
    let mut table = Table::new(&["d", "norm", "rho"]);
    for d in &w.support {
        table.push(vec![d.to_string(), d.norm().to_string(), num(w.rho(d))]);
    }
    let flagged: Vec<String> = w.flagged.iter().map(ToString::to_string).collect();
    report
        .measured("rep", label)
        .measured("support_size", w.support.len())
        .measured("diagonal", w.diagonal)
        .measured("closed_form_diagonal", w.closed_form_diagonal)
        .measured("diagonal_gap", gap)
        .measured("rho_unit", unit)
        .measured("max_abs_rho", w.max_abs_rho())
        .measured("flagged_primes", flagged);
    if gap > a.tol {
        report.violation(format!("solved and closed-form diagonals differ by {gap:e}"));
    }
    if unit != 1.0 {
        report.violation(format!("rho(O_F) = {unit}"));
    }
    if w.flagged.is_empty() && w.max_abs_rho() > 1.0 + 1e-12 {
        report.violation(format!("max |rho| = {} exceeds 1", w.max_abs_rho()));
    }
    report.table = Some(table);
    Ok(())
}

fn smoothed(a: &SmoothedArgs, report: &mut Report) -> CliResult<()> {
    let chi = a.chi.resolve()?;
    let rep = character_rep(&chi)?;
    let kappa = character_kappa(&rep)?;
    let d = IdealFactorization::rational(a.d.max(1));
    let r = smoothed_rs_sum(&rep, &rep, &d, a.x, a.t, &TestFunction::standard(), kappa)?;
    report
        .measured("character", chi.label())
        .absorb(&r, &[], &["x", "t", "d"])
        .measured("relative_residual", r.relative_residual());
    Ok(())
}

fn partial_lower(a: &PartialLowerArgs, report: &mut Report) -> CliResult<()> {
    let chars: Vec<_> = (1..=a.q_max).flat_map(primitive_characters).collect();
    let rows = chars
        .par_iter()
        .map(|chi| {
            let rep = character_rep(chi)?;
            a.z.iter()
                .map(|&z| rs_partial_sum_lower(&rep, z).map(|(l, r)| (chi.label(), z, l, r)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["character", "z", "lhs", "rhs"]);
    let mut worst_margin = f64::INFINITY;
    let mut failures = Vec::new();
    for (label, z, l, r) in rows.into_iter().flatten() {
        worst_margin = worst_margin.min(l - r);
        if l < r {
            failures.push(format!("{label} at z = {z}"));
        }
        table.push(vec![label, num(z), num(l), num(r)]);
    }
    report
        .measured("characters", chars.len())
        .measured("checks", table.rows.len())
        .measured("min_lhs_minus_rhs", worst_margin);
    if !failures.is_empty() {
        report.violation(format!("partial sum below the bound for {}", failures.join(", ")));
    }
    report.table = Some(table);
    Ok(())
}
