use autosieve::constants::ZERO_SUM_SLACK;
use autosieve::zero::density::{subconvexity_rhs, zero_density_sum};
use autosieve::zero::explicit::{zero_sum_identity, DEFAULT_NCAP};
use autosieve::zero::scan::{critical_line_sign_changes, scan_zeros, ZeroList, MAX_HEIGHT};
use autosieve::zero::turan::{power_sum_zero_lower, zero_detect_criterion};
use clap::{Args, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::input::{conductor_family, CharArgs};
use crate::report::{num, CliResult, Failure, Report, Table};

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Zeros {
    /// Zeros of L(s, chi) with |gamma| <= T by the argument principle.
    Scan(ScanArgs),
    /// Zero counts N(sigma, T) summed over a character family.
    Zde(ZdeArgs),
    /// Both sides of the zero-detection criterion at 1 + i tau.
    Detect(DetectArgs),
    /// Partial zero sums against the analytic side of the real-part identity.
    Identity(IdentityArgs),
    /// Explicit terms of the subconvexity bound at s = 1/2.
    Subconvexity(SubconvexityArgs),
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chi: CharArgs,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_min: f64,
    /// Grid step of the critical-line sign-change cross-check.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ZdeArgs {
    /// Cap on the analytic conductor q (3 + |kappa|).
    #[arg(long = "Qmax")]
    #[serde(rename = "Qmax")]
    pub q_max: f64,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct DetectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chi: CharArgs,
    #[arg(long)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    #[arg(long = "K", default_value_t = 1)]
    #[serde(rename = "K")]
    pub big_k: usize,
    /// The prime integral stops at this norm.
    #[arg(long, default_value_t = DEFAULT_NCAP)]
    pub cap: u64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct IdentityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chi: CharArgs,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Box heights, comma separated; zeros are scanned once to the largest.
    #[arg(long = "T", value_delimiter = ',', default_values_t = [10.0, 30.0, 50.0])]
    #[serde(rename = "T")]
    pub heights: Vec<f64>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SubconvexityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chi: CharArgs,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
}

pub fn run(cmd: &Zeros, report: &mut Report) -> CliResult<()> {
    match cmd {
        Zeros::Scan(a) => scan(a, report),
        Zeros::Zde(a) => zde(a, report),
        Zeros::Detect(a) => detect(a, report),
        Zeros::Identity(a) => identity(a, report),
        Zeros::Subconvexity(a) => subconvexity(a, report),
    }
}

fn zero_table(list: &ZeroList) -> Table {
    let mut table = Table::new(&["beta", "gamma"]);
    for z in &list.zeros {
        table.push(vec![num(z.re), num(z.im)]);
    }
    table
}

fn scan(a: &ScanArgs, report: &mut Report) -> CliResult<()> {
    let chi = a.chi.resolve()?;
    let list = scan_zeros(&chi, a.t, a.sigma_min)?;
    let upper = list.upper_half();
    let on_line = |z: &&Complex64| (z.re - 0.5).abs() <= 1e-6;
    // Real characters: sign changes on (0, T] against zeros above the axis.
    // Otherwise the grid covers [-T, T].
    let (t0, expected) = if chi.is_real() {
        (a.step.min(a.t) * 0.5, upper.iter().filter(on_line).count())
    } else {
        (-a.t, list.zeros.iter().filter(on_line).count())
    };
    let changes = critical_line_sign_changes(&chi, t0, a.t, a.step)?;
    let max_offset = list.zeros.iter().map(|z| (z.re - 0.5).abs()).fold(0.0, f64::max);
    report
        .measured("character", chi.label())
        .measured("zero_count", list.zeros.len())
        .measured("zeros_above_axis", upper.len())
        .measured("lowest_positive_ordinate", upper.first().map(|z| z.im))
        .measured("max_abs_beta_minus_half", max_offset)
        .measured("critical_line_sign_changes", changes)
        .measured("zero_list", &list);
    if a.sigma_min <= 0.5 && changes != expected {
        report.violation(format!("{changes} sign changes on the critical line against {expected} zeros found there"));
    }
    report.table = Some(zero_table(&list));
    Ok(())
}

fn zde(a: &ZdeArgs, report: &mut Report) -> CliResult<()> {
    let family = conductor_family(a.q_max)?;
    let r = zero_density_sum(&family, a.sigma, a.t)?;
    let mut table = Table::new(&["character", "count"]);
    for l in &r.lists {
        table.push(vec![l.character.clone(), l.count(a.sigma, a.t).to_string()]);
    }
    let max_offset = r
        .lists
        .iter()
        .flat_map(|l| l.zeros.iter())
        .map(|z| (z.re - 0.5).abs())
        .fold(0.0, f64::max);
    report
        .absorb(&r, &["log_envelope"], &["sigma", "t"])
        .measured("max_abs_beta_minus_half", max_offset)
        .measured("within_envelope", (r.count as f64).ln() <= r.log_envelope);
    report.table = Some(table);
    Ok(())
}

fn height_for(tau: f64) -> CliResult<f64> {
    let t = (tau.abs() + 1.0).min(MAX_HEIGHT);
    if tau.abs() > MAX_HEIGHT {
        return Err(Failure::Usage(format!("|tau| above the scan limit {MAX_HEIGHT}")));
    }
    Ok(t)
}

fn detect(a: &DetectArgs, report: &mut Report) -> CliResult<()> {
    let chi = a.chi.resolve()?;
    let zeros = scan_zeros(&chi, height_for(a.tau)?, 0.0)?;
    let r = zero_detect_criterion(&chi, a.tau, a.eta, &zeros, a.big_k, a.cap)?;
    report
        .measured("character", chi.label())
        .absorb(&r, &["rhs_log10"], &["q", "tau", "eta", "big_k", "integral_cap"]);
    if r.zero_near {
        let s = Complex64::new(1.0 + a.eta, a.tau);
        let p = power_sum_zero_lower(&zeros, s, a.eta, a.big_k)?;
        report.measured("power_sum_k", p.k).measured("power_sum_value", p.value).envelope("power_sum_bound", p.bound);
        report.measured("power_sum_fallback", p.fallback).measured("power_sum_hypothesis_holds", p.hypothesis_holds);
    }
    Ok(())
}

fn identity(a: &IdentityArgs, report: &mut Report) -> CliResult<()> {
    let chi = a.chi.resolve()?;
    let mut heights = a.heights.clone();
    heights.sort_by(f64::total_cmp);
    let top = *heights.last().ok_or_else(|| Failure::Usage("pass at least one height".into()))?;
    let full = scan_zeros(&chi, top, 0.0)?;
    let mut table = Table::new(&["T", "zeros_used", "partial_sum", "analytic_side", "gap"]);
    let mut rows = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let mut last = None;
    for &h in &heights {
        let mut list = full.clone();
        list.zeros.retain(|z| z.im.abs() <= h);
        list.bbox.1 = h;
        let r = zero_sum_identity(&chi, a.eta, a.t, &list)?;
        let gap = r.analytic_side - r.partial_sum;
        table.push(vec![num(h), r.zeros_used.to_string(), num(r.partial_sum), num(r.analytic_side), num(gap)]);
        rows.push((h, r.zeros_used, r.partial_sum, gap));
        if r.partial_sum < prev {
            report.violation(format!("partial sum decreases at T = {h}"));
        }
        if gap < -1e-9 {
            report.violation(format!("partial sum exceeds the analytic side at T = {h}"));
        }
        prev = r.partial_sum;
        last = Some(r);
    }
    let r = last.expect("at least one height");
    report
        .measured("character", chi.label())
        .constant(ZERO_SUM_SLACK)
        .absorb(&r, &["lemma_bound"], &["eta", "t", "slack"])
        .measured("final_gap", r.analytic_side - r.partial_sum)
        .measured("by_height", rows);
    report.table = Some(table);
    Ok(())
}

fn subconvexity(a: &SubconvexityArgs, report: &mut Report) -> CliResult<()> {
    let chi = a.chi.resolve()?;
    let r = subconvexity_rhs(&chi, a.alpha)?;
    report
        .measured("character", chi.label())
        .absorb(&r, &["conductor_term", "zero_term", "l_term", "bound"], &["q", "alpha"]);
    Ok(())
}
