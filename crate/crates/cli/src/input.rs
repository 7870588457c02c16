//! Characters, reps, family files and coefficient CSVs named on the command line.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use autosieve::character::{primitive_characters, real_primitive_character, DirichletCharacter};
use autosieve::family_file::{FamilyFile, LoadedFamily};
use autosieve::rep::{character_rep, AutomorphicRepData, Family, FamilyMember};
use clap::Args;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::report::{CliResult, Failure};

#[derive(Args, Clone, Debug, Serialize)]
pub struct CharArgs {
    /// Modulus of the character.
    #[arg(long)]
    pub q: u64,
    /// Exponents on the cyclic generators, comma separated. Defaults to the
    /// real primitive character mod q, else the first primitive one.
    #[arg(long, value_delimiter = ',')]
    pub index: Option<Vec<u64>>,
}

impl CharArgs {
    pub fn resolve(&self) -> CliResult<DirichletCharacter> {
        resolve_character(self.q, self.index.as_deref())
    }
}

pub fn resolve_character(q: u64, index: Option<&[u64]>) -> CliResult<DirichletCharacter> {
    if q == 0 {
        return Err(Failure::Usage("q must be at least 1".into()));
    }
    match index {
        Some(ix) => DirichletCharacter::new(q, ix).map_err(|e| Failure::Usage(e.to_string())),
        None => real_primitive_character(q)
            .or_else(|| primitive_characters(q).into_iter().next())
            .ok_or_else(|| Failure::Usage(format!("no primitive character mod {q}; pass --index"))),
    }
}

/// A single rep, either a member of a family file or a character.
#[derive(Args, Clone, Debug, Serialize)]
pub struct RepArgs {
    /// Family file to take the rep from.
    #[arg(long, conflicts_with = "q")]
    pub family: Option<PathBuf>,
    /// Position of the rep in the family file.
    #[arg(long, default_value_t = 0)]
    pub member: usize,
    /// Use the character rep of this modulus instead of a family member.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, value_delimiter = ',', requires = "q")]
    pub index: Option<Vec<u64>>,
}

impl RepArgs {
    /// The rep and a label naming it.
    pub fn resolve(&self) -> CliResult<(AutomorphicRepData, String)> {
        match (&self.family, self.q) {
            (Some(path), _) => {
                let mut reps = family_reps(path)?;
                if self.member >= reps.len() {
                    return Err(Failure::Usage(format!("member {} out of range ({} reps)", self.member, reps.len())));
                }
                Ok((reps.swap_remove(self.member), format!("member {}", self.member)))
            }
            (None, Some(q)) => {
                let chi = resolve_character(q, self.index.as_deref())?;
                Ok((character_rep(&chi)?, chi.label()))
            }
            (None, None) => Err(Failure::Usage("pass --family or --q".into())),
        }
    }
}

/// Primitive characters with `q (3 + |kappa|) <= q_max`.
pub fn conductor_family(q_max: f64) -> CliResult<Family<DirichletCharacter>> {
    let members: Vec<DirichletCharacter> = (1..=(q_max / 3.0).floor() as u64)
        .flat_map(primitive_characters)
        .filter(|c| c.analytic_conductor_at(0.0) <= q_max)
        .collect();
    Ok(Family::new(members, q_max)?)
}

pub fn load_family(path: &Path) -> CliResult<LoadedFamily> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(FamilyFile::parse(&text)?.load()?)
}

/// Every member as a rep; character members must be primitive.
pub fn family_reps(path: &Path) -> CliResult<Vec<AutomorphicRepData>> {
    match load_family(path)? {
        LoadedFamily::Reps(f) => Ok(f.members().to_vec()),
        LoadedFamily::Characters(f) => Ok(f.members().iter().map(character_rep).collect::<Result<_, _>>()?),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffRow {
    norm: u64,
    re: f64,
    im: f64,
}

/// Reads a `norm,re,im` file. Lines starting with `#` are comments.
pub fn read_coeffs(path: &Path) -> CliResult<BTreeMap<u64, Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != ["norm", "re", "im"] {
        return Err(Failure::Usage(format!("{}: header must be norm,re,im, got {}", path.display(), header.join(","))));
    }
    let mut out = BTreeMap::new();
    for row in reader.deserialize::<CoeffRow>() {
        let row = row?;
        if row.norm == 0 {
            return Err(Failure::Usage(format!("{}: norms start at 1", path.display())));
        }
        if out.insert(row.norm, Complex64::new(row.re, row.im)).is_some() {
            return Err(Failure::Usage(format!("{}: norm {} listed twice", path.display(), row.norm)));
        }
    }
    Ok(out)
}

/// Coefficients uniform on the unit square `[-1, 1]^2` at each listed norm.
pub fn random_coeffs(norms: impl IntoIterator<Item = u64>, seed: u64) -> BTreeMap<u64, Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    norms
        .into_iter()
        .map(|n| (n, Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, text: &str) -> PathBuf {
        let p = dir.join("c.csv");
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn coefficient_files() {
        let dir = tempfile::tempdir().unwrap();
        let ok = write(dir.path(), "# comment\nnorm,re,im\n2, 0.5, -1\n1,1,0\n");
        let c = read_coeffs(&ok).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[&2], Complex64::new(0.5, -1.0));
        for bad in ["n,re,im\n1,0,0\n", "norm,re,im\n0,1,0\n", "norm,re,im\n3,1,0\n3,0,1\n", "norm,re,im\n1,x,0\n"] {
            assert!(read_coeffs(&write(dir.path(), bad)).is_err(), "{bad}");
        }
    }

    #[test]
    fn default_characters() {
        assert_eq!(resolve_character(1, None).unwrap().label(), DirichletCharacter::trivial(1).label());
        assert!(resolve_character(3, None).unwrap().is_real());
        assert!(resolve_character(5, None).unwrap().is_primitive());
        // Nothing mod 2 is primitive.
        assert!(resolve_character(2, None).is_err());
        assert!(resolve_character(0, None).is_err());
    }

    #[test]
    fn conductor_family_respects_the_cap() {
        let f = conductor_family(40.0).unwrap();
        assert!(f.members().iter().all(|c| c.is_primitive() && c.analytic_conductor_at(0.0) <= 40.0));
        assert!(f.members().iter().any(|c| c.modulus() == 13));
    }

    #[test]
    fn random_coefficients_repeat() {
        assert_eq!(random_coeffs(1..=5, 4), random_coeffs(1..=5, 4));
        assert_ne!(random_coeffs(1..=5, 4), random_coeffs(1..=5, 5));
    }
}
