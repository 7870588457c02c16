//! Synthetic automorphic representation data, analytic conductors and
//! conductor-truncated families.

use std::borrow::Cow;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::ideal::{FieldSpec, IdealFactorization, PrimeIdeal};
use crate::schur;

/// Slack for floating comparisons in the constructor bounds.
const BOUND_TOL: f64 = 1e-12;

/// The unconditional Ramanujan margin `1/2 - 1/(n^2 + 1)`.
pub fn default_theta(n: usize) -> f64 {
    0.5 - 1.0 / ((n * n) as f64 + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SatakeSource {
    /// Explicit parameters at finitely many prime ideals.
    Table(BTreeMap<PrimeIdeal, Vec<Complex64>>),
    /// `alpha(p) = chi(p)` at every rational prime.
    Character(DirichletCharacter),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutomorphicRepData {
    n: usize,
    field: FieldSpec,
    conductor: IdealFactorization,
    satake: SatakeSource,
    /// One list of `n` parameters per archimedean place, real places first.
    arch: Vec<Vec<Complex64>>,
    pole_order: u32,
    theta: f64,
}

impl AutomorphicRepData {
    pub fn new(
        n: usize,
        field: FieldSpec,
        conductor: IdealFactorization,
        satake: BTreeMap<PrimeIdeal, Vec<Complex64>>,
        arch: Vec<Vec<Complex64>>,
        pole_order: u32,
        theta: f64,
    ) -> Result<Self> {
        let rep = AutomorphicRepData {
            n,
            field,
            conductor,
            satake: SatakeSource::Table(satake),
            arch,
            pole_order,
            theta,
        };
        rep.validate()?;
        Ok(rep)
    }

    /// Unramified data over `field` with trivial archimedean parameters and
    /// the default theta.
    pub fn unramified(field: FieldSpec, satake: BTreeMap<PrimeIdeal, Vec<Complex64>>, n: usize) -> Result<Self> {
        let places = (field.real_places + field.complex_places) as usize;
        Self::new(
            n,
            field,
            IdealFactorization::unit(),
            satake,
            vec![vec![Complex64::new(0.0, 0.0); n]; places],
            0,
            default_theta(n),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidRep("degree must be >= 1".into()));
        }
        self.field.validate()?;
        if !(0.0..=default_theta(n) + BOUND_TOL).contains(&self.theta) {
            return Err(Error::InvalidRep(format!(
                "theta = {} outside [0, 1/2 - 1/(n^2+1)] for n = {n}",
                self.theta
            )));
        }
        if self.pole_order > 1 {
            return Err(Error::InvalidRep("pole order must be 0 or 1".into()));
        }
        let places = (self.field.real_places + self.field.complex_places) as usize;
        if self.arch.len() != places {
            return Err(Error::InvalidRep(format!(
                "{} archimedean parameter lists for {places} places",
                self.arch.len()
            )));
        }
        for mus in &self.arch {
            if mus.len() != n {
                return Err(Error::InvalidRep(format!("archimedean list of length {} for n = {n}", mus.len())));
            }
            if let Some(mu) = mus.iter().find(|mu| mu.re < -self.theta - BOUND_TOL) {
                return Err(Error::InvalidRep(format!("Re(mu) = {} < -theta", mu.re)));
            }
        }
        if let SatakeSource::Table(table) = &self.satake {
            for (p, alphas) in table {
                if alphas.len() != n {
                    return Err(Error::InvalidRep(format!("{} Satake parameters at {p} for n = {n}", alphas.len())));
                }
                let bound = (p.norm() as f64).powf(self.theta) * (1.0 + BOUND_TOL);
                if let Some(a) = alphas.iter().find(|a| a.norm() > bound) {
                    return Err(Error::InvalidRep(format!("|alpha| = {} exceeds N(p)^theta at {p}", a.norm())));
                }
                if self.conductor.ord(p) == 0 && alphas.iter().any(|a| a.norm() == 0.0) {
                    return Err(Error::InvalidRep(format!("zero Satake parameter at unramified {p}")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn conductor(&self) -> &IdealFactorization {
        &self.conductor
    }

    pub fn arch(&self) -> &[Vec<Complex64>] {
        &self.arch
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn source(&self) -> &SatakeSource {
        &self.satake
    }

    pub fn character(&self) -> Option<&DirichletCharacter> {
        match &self.satake {
            SatakeSource::Character(chi) => Some(chi),
            SatakeSource::Table(_) => None,
        }
    }

    pub fn is_ramified(&self, p: &PrimeIdeal) -> bool {
        self.conductor.ord(p) > 0
    }

    /// `A_pi(p)`.
    pub fn satake(&self, p: &PrimeIdeal) -> Result<Cow<'_, [Complex64]>> {
        match &self.satake {
            SatakeSource::Table(table) => table
                .get(p)
                .map(|v| Cow::Borrowed(v.as_slice()))
                .ok_or_else(|| Error::MissingSatake(p.clone())),
            SatakeSource::Character(chi) => {
                if p.f != 1 || p.index != 0 {
                    return Err(Error::MissingSatake(p.clone()));
                }
                Ok(Cow::Owned(vec![chi.value_u(p.p)]))
            }
        }
    }

    /// The contragredient: conjugated Satake and archimedean parameters.
    pub fn dual(&self) -> Self {
        let satake = match &self.satake {
            SatakeSource::Table(table) => SatakeSource::Table(
                table
                    .iter()
                    .map(|(p, v)| (p.clone(), v.iter().map(Complex64::conj).collect()))
                    .collect(),
            ),
            SatakeSource::Character(chi) => SatakeSource::Character(chi.conj()),
        };
        AutomorphicRepData {
            satake,
            arch: self
                .arch
                .iter()
                .map(|v| v.iter().map(Complex64::conj).collect())
                .collect(),
            ..self.clone()
        }
    }
}

/// `C(pi, t) = D_F^n N(q) prod_v prod_j (3 + |it + mu_j(v)|^{d(v)})`.
pub fn analytic_conductor(rep: &AutomorphicRepData, t: f64) -> f64 {
    let mut c = (rep.field.discriminant_norm as f64).powi(rep.n as i32) * rep.conductor.norm() as f64;
    for (mus, d) in rep.arch.iter().zip(rep.field.place_degrees()) {
        for mu in mus {
            c *= 3.0 + (Complex64::new(0.0, t) + mu).norm().powi(d as i32);
        }
    }
    c
}

/// The GL(1)/Q representation attached to a primitive character.
pub fn character_rep(chi: &DirichletCharacter) -> Result<AutomorphicRepData> {
    if !chi.is_primitive() {
        return Err(Error::Character(format!("{chi} is not primitive")));
    }
    Ok(AutomorphicRepData {
        n: 1,
        field: FieldSpec::rationals(),
        conductor: IdealFactorization::rational(chi.modulus()),
        satake: SatakeSource::Character(chi.clone()),
        arch: vec![vec![Complex64::new(chi.parity() as f64, 0.0)]],
        pole_order: u32::from(chi.modulus() == 1),
        theta: 0.0,
    })
}

/// What the large sieve needs from a family member.
pub trait FamilyMember: Sync {
    fn degree(&self) -> usize;
    fn base_field(&self) -> FieldSpec;
    fn conductor_ideal(&self) -> IdealFactorization;
    fn analytic_conductor_at(&self, t: f64) -> f64;
    fn eigenvalue(&self, ideal: &IdealFactorization) -> Result<Complex64>;
}

impl FamilyMember for AutomorphicRepData {
    fn degree(&self) -> usize {
        self.n
    }

    fn base_field(&self) -> FieldSpec {
        self.field.clone()
    }

    fn conductor_ideal(&self) -> IdealFactorization {
        self.conductor.clone()
    }

    fn analytic_conductor_at(&self, t: f64) -> f64 {
        analytic_conductor(self, t)
    }

    fn eigenvalue(&self, ideal: &IdealFactorization) -> Result<Complex64> {
        schur::hecke_eigenvalue(self, ideal)
    }
}

/// Characters enter directly so that imprimitive ones can populate a full
/// character group; the modulus plays the role of the conductor.
impl FamilyMember for DirichletCharacter {
    fn degree(&self) -> usize {
        1
    }

    fn base_field(&self) -> FieldSpec {
        FieldSpec::rationals()
    }

    fn conductor_ideal(&self) -> IdealFactorization {
        IdealFactorization::rational(self.modulus())
    }

    fn analytic_conductor_at(&self, t: f64) -> f64 {
        self.modulus() as f64 * (3.0 + Complex64::new(self.parity() as f64, t).norm())
    }

    fn eigenvalue(&self, ideal: &IdealFactorization) -> Result<Complex64> {
        if ideal.primes().any(|p| p.f != 1 || p.index != 0) {
            return Err(Error::Unsupported("characters act on ideals of Q only".into()));
        }
        Ok(self.value_u(ideal.norm()))
    }
}

/// A family truncated at analytic conductor `q_cap`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family<M = AutomorphicRepData> {
    members: Vec<M>,
    q_cap: f64,
}

impl<M: FamilyMember> Family<M> {
    pub fn new(members: Vec<M>, q_cap: f64) -> Result<Self> {
        if let Some((i, c)) = members
            .iter()
            .map(|m| m.analytic_conductor_at(0.0))
            .enumerate()
            .find(|(_, c)| *c > q_cap * (1.0 + BOUND_TOL))
        {
            return Err(Error::InvalidRep(format!("member {i} has conductor {c} > Q = {q_cap}")));
        }
        Ok(Family { members, q_cap })
    }

    /// Family whose cap is the largest member conductor.
    pub fn tight(members: Vec<M>) -> Self {
        let q_cap = members
            .iter()
            .map(|m| m.analytic_conductor_at(0.0))
            .fold(0.0, f64::max);
        Family { members, q_cap }
    }

    pub fn members(&self) -> &[M] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn q_cap(&self) -> f64 {
        self.q_cap
    }

    /// Common degree of the members (1 for an empty family).
    pub fn degree(&self) -> usize {
        self.members.first().map_or(1, FamilyMember::degree)
    }
}
