use std::path::PathBuf;

use autosieve::ideal::ideals_up_to;
use autosieve::schur::{rs_coefficient_ideal, rs_local_series};
use clap::{Args, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::input::family_reps;
use crate::report::{num, CliResult, Failure, Report, Table};

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rs {
    /// RS coefficients of two family members, by partition sums and by
    /// local Euler series.
    Expand(ExpandArgs),
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ExpandArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub a: usize,
    #[arg(long, default_value_t = 0)]
    pub b: usize,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n_max: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

pub fn run(cmd: &Rs, report: &mut Report) -> CliResult<()> {
    let Rs::Expand(a) = cmd;
    let reps = family_reps(&a.family)?;
    let pick = |i: usize| {
        reps.get(i).ok_or_else(|| Failure::Usage(format!("member {i} out of range ({} reps)", reps.len())))
    };
    let (ra, rb) = (pick(a.a)?, pick(a.b)?);
    let over_q = ra.field().degree == 1;
    let mut table = if over_q { Table::new(&["norm", "re", "im"]) } else { Table::new(&["ideal", "norm", "re", "im"]) };
    let mut worst = 0.0f64;
    let mut skipped = 0usize;
    for n in ideals_up_to(ra.field(), a.n_max)? {
        if n.primes().any(|p| ra.is_ramified(p) || rb.is_ramified(p)) {
            skipped += 1;
            continue;
        }
        let by_partitions = rs_coefficient_ideal(ra, rb, &n)?;
        let mut by_series = Complex64::new(1.0, 0.0);
        for (p, e) in n.factors() {
            by_series *= rs_local_series(&ra.satake(p)?, &rb.satake(p)?, *e as usize).coeff(*e as usize);
        }
        worst = worst.max((by_partitions - by_series).norm());
        let mut row = if over_q { vec![] } else { vec![n.to_string()] };
        row.extend([n.norm().to_string(), num(by_partitions.re), num(by_partitions.im)]);
        table.push(row);
    }
    report
        .measured("coefficients", table.rows.len())
        .measured("ramified_skipped", skipped)
        .measured("max_route_deviation", worst);
    if worst > a.tol {
        report.violation(format!("partition and series routes differ by {worst:e}"));
    }
    report.table = Some(table);
    Ok(())
}
