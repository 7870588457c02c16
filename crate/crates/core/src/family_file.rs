//! JSON family files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "field": {"degree": 2, "discriminant_norm": 5, "real_places": 2, "complex_places": 0,
//!             "splitting": {"2": ["2^2"], "11": ["11^1", "11^1#1"]}},
//!   "q_cap": 500.0,
//!   "reps": [{"n": 1, "conductor": {"11^1#1": 1}, "satake": {"2^2": [[-1.0, 0.0]]},
//!             "arch": [[[0.0, 0.0]], [[0.0, 0.0]]], "pole_order": 0, "theta": 0.0}]
//! }
//! ```
//!
//! `field` defaults to Q and `q_cap` to the largest member conductor. A
//! character family replaces `reps` with `"characters": [{"q": 5, "index": [1]}]`.
//! Prime keys are `p^f`, or `p^f#i` for the `i`-th prime of that norm.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::ideal::{FieldSpec, IdealFactorization, PrimeIdeal};
use crate::rep::{AutomorphicRepData, Family, SatakeSource};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub degree: u32,
    pub discriminant_norm: u64,
    pub real_places: u32,
    pub complex_places: u32,
    #[serde(default)]
    pub splitting: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub n: usize,
    #[serde(default)]
    pub conductor: BTreeMap<String, u32>,
    pub satake: BTreeMap<String, Vec<[f64; 2]>>,
    pub arch: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub pole_order: u32,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterFile {
    pub q: u64,
    pub index: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reps: Vec<RepFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub characters: Vec<CharacterFile>,
}

pub enum LoadedFamily {
    Reps(Family<AutomorphicRepData>),
    Characters(Family<DirichletCharacter>),
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl FieldFile {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        let mut splitting = BTreeMap::new();
        for (p, keys) in &self.splitting {
            let p: u64 = p.parse().map_err(|e| Error::Parse(format!("splitting key {p}: {e}")))?;
            let ideals = keys.iter().map(|k| PrimeIdeal::parse_key(k)).collect::<Result<Vec<_>>>()?;
            splitting.insert(p, ideals);
        }
        FieldSpec::new(self.degree, self.discriminant_norm, self.real_places, self.complex_places, splitting)
    }

    pub fn from_spec(field: &FieldSpec) -> Self {
        FieldFile {
            degree: field.degree,
            discriminant_norm: field.discriminant_norm,
            real_places: field.real_places,
            complex_places: field.complex_places,
            splitting: field
                .splitting
                .iter()
                .map(|(p, v)| (p.to_string(), v.iter().map(PrimeIdeal::key).collect()))
                .collect(),
        }
    }
}

impl RepFile {
    pub fn to_rep(&self, field: &FieldSpec) -> Result<AutomorphicRepData> {
        let conductor = IdealFactorization::new(
            self.conductor
                .iter()
                .map(|(k, e)| Ok((PrimeIdeal::parse_key(k)?, *e)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let satake = self
            .satake
            .iter()
            .map(|(k, v)| Ok((PrimeIdeal::parse_key(k)?, v.iter().copied().map(complex).collect())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let arch = self.arch.iter().map(|v| v.iter().copied().map(complex).collect()).collect();
        AutomorphicRepData::new(self.n, field.clone(), conductor, satake, arch, self.pole_order, self.theta)
    }

    pub fn from_rep(rep: &AutomorphicRepData) -> Result<Self> {
        let SatakeSource::Table(table) = rep.source() else {
            return Err(Error::Unsupported("character reps are written as characters".into()));
        };
        Ok(RepFile {
            n: rep.n(),
            conductor: rep.conductor().factors().iter().map(|(p, e)| (p.key(), *e)).collect(),
            satake: table.iter().map(|(p, v)| (p.key(), v.iter().map(pair).collect())).collect(),
            arch: rep.arch().iter().map(|v| v.iter().map(pair).collect()).collect(),
            pole_order: rep.pole_order(),
            theta: rep.theta(),
        })
    }
}

impl FamilyFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema_version {}", file.schema_version)));
        }
        Ok(file)
    }

    pub fn load(&self) -> Result<LoadedFamily> {
        match (self.reps.is_empty(), self.characters.is_empty()) {
            (false, true) => {
                let field = match &self.field {
                    Some(f) => f.to_spec()?,
                    None => FieldSpec::rationals(),
                };
                let reps = self.reps.iter().map(|r| r.to_rep(&field)).collect::<Result<Vec<_>>>()?;
                if reps.windows(2).any(|w| w[0].n() != w[1].n()) {
                    return Err(Error::InvalidRep("family members must share a degree".into()));
                }
                Ok(LoadedFamily::Reps(self.cap(reps)?))
            }
            (true, false) => {
                if self.field.as_ref().is_some_and(|f| f.degree != 1) {
                    return Err(Error::Unsupported("character families live over Q".into()));
                }
                let chars = self
                    .characters
                    .iter()
                    .map(|c| DirichletCharacter::new(c.q, &c.index))
                    .collect::<Result<Vec<_>>>()?;
                Ok(LoadedFamily::Characters(self.cap(chars)?))
            }
            _ => Err(Error::Parse("a family file lists either reps or characters, not both or neither".into())),
        }
    }

    fn cap<M: crate::rep::FamilyMember>(&self, members: Vec<M>) -> Result<Family<M>> {
        match self.q_cap {
            Some(q) => Family::new(members, q),
            None => Ok(Family::tight(members)),
        }
    }

    pub fn from_reps(family: &Family<AutomorphicRepData>) -> Result<Self> {
        let field = family.members().first().map(|r| FieldFile::from_spec(r.field()));
        Ok(FamilyFile {
            schema_version: SCHEMA_VERSION,
            field,
            q_cap: Some(family.q_cap()),
            reps: family.members().iter().map(RepFile::from_rep).collect::<Result<_>>()?,
            characters: Vec::new(),
        })
    }

    pub fn from_characters(family: &Family<DirichletCharacter>) -> Self {
        FamilyFile {
            schema_version: SCHEMA_VERSION,
            field: None,
            q_cap: Some(family.q_cap()),
            reps: Vec::new(),
            characters: family
                .members()
                .iter()
                .map(|c| CharacterFile { q: c.modulus(), index: c.index().to_vec() })
                .collect(),
        }
    }
}
