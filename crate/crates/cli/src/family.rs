//! Family files on stdout or `--out`. These are data, not reports: they hold
//! only what `FamilyFile` accepts back.

use std::fs;
use std::path::PathBuf;

use autosieve::character::all_characters;
use autosieve::family_file::{FamilyFile, FieldFile};
use autosieve::ideal::FieldSpec;
use autosieve::large_sieve::sample_unitary_family;
use autosieve::rep::Family;
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::input::conductor_family;
use crate::report::{CliResult, Failure};

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyCmd {
    /// Random unramified reps with Satake parameters near the unit circle.
    Sample(SampleArgs),
    /// Dirichlet characters, by conductor cap or as a full group.
    Characters(CharactersArgs),
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Satake parameters are drawn at every prime ideal up to this norm.
    #[arg(long, default_value_t = 50)]
    pub primes_up_to: u64,
    /// Parameters satisfy |alpha| = N(p)^t with |t| <= theta.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// JSON field description; Q when omitted.
    #[arg(long)]
    pub field: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CharactersArgs {
    /// Every primitive character with q (3 + |kappa|) at most this.
    #[arg(long, conflicts_with = "modulus")]
    pub q_max: Option<f64>,
    /// Every character mod this modulus, primitive or not.
    #[arg(long)]
    pub modulus: Option<u64>,
}

pub fn run(cmd: &FamilyCmd, seed: u64) -> CliResult<String> {
    let file = match cmd {
        FamilyCmd::Sample(a) => {
            let field = match &a.field {
                Some(p) => {
                    let text = fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
                    let f: FieldFile = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    f.to_spec()?
                }
                None => FieldSpec::rationals(),
            };
            FamilyFile::from_reps(&sample_unitary_family(a.n, a.count, &field, a.primes_up_to, seed, a.theta)?)?
        }
        FamilyCmd::Characters(a) => {
            let family = match (a.q_max, a.modulus) {
                (Some(q), None) => conductor_family(q)?,
                (None, Some(m)) if m >= 1 => Family::tight(all_characters(m)),
                _ => return Err(Failure::Usage("pass --q-max or --modulus".into())),
            };
            FamilyFile::from_characters(&family)
        }
    };
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}
