//! Synthetic prime ideals, ideal factorizations and number-field splitting
//! tables. Only norms and factorizations are modelled; there is no ring
//! arithmetic.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// A prime ideal above the rational prime `p` with residue degree `f`.
/// Distinct primes above the same `p` are told apart by `index`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub f: u32,
    pub index: u32,
}

impl PrimeIdeal {
    pub fn new(p: u64, f: u32, index: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::InvalidIdeal(format!("{p} is not a rational prime")));
        }
        if f == 0 {
            return Err(Error::InvalidIdeal("residue degree must be >= 1".into()));
        }
        Ok(PrimeIdeal { p, f, index })
    }

    /// The ideal `(p)` of Z.
    pub fn rational(p: u64) -> Self {
        debug_assert!(arith::is_prime(p));
        PrimeIdeal { p, f: 1, index: 0 }
    }

    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// Key used in family files: `p^f`, or `p^f#i` when `index > 0`.
    pub fn key(&self) -> String {
        if self.index == 0 {
            format!("{}^{}", self.p, self.f)
        } else {
            format!("{}^{}#{}", self.p, self.f, self.index)
        }
    }

    pub fn parse_key(key: &str) -> Result<Self> {
        let (body, index) = match key.split_once('#') {
            Some((b, i)) => (b, i.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{key}: {e}")))?),
            None => (key, 0),
        };
        let (p, f) = match body.split_once('^') {
            Some((p, f)) => (p, f),
            None => (body, "1"),
        };
        let p = p.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{key}: {e}")))?;
        let f = f.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{key}: {e}")))?;
        PrimeIdeal::new(p, f, index)
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.norm(), self.p, self.index, self.f).cmp(&(other.norm(), other.p, other.index, other.f))
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{}]", self.key())
    }
}

/// A nonzero integral ideal as a product of distinct prime ideals with
/// positive exponents. The empty product is the unit ideal `O_F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealFactorization {
    factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealFactorization {
    pub fn new(mut factors: Vec<(PrimeIdeal, u32)>) -> Result<Self> {
        if factors.iter().any(|(_, e)| *e == 0) {
            return Err(Error::InvalidIdeal("exponents must be >= 1".into()));
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidIdeal("repeated prime ideal".into()));
        }
        Ok(IdealFactorization { factors })
    }

    pub fn unit() -> Self {
        IdealFactorization { factors: Vec::new() }
    }

    pub fn prime(p: PrimeIdeal) -> Self {
        IdealFactorization { factors: vec![(p, 1)] }
    }

    pub fn prime_power(p: PrimeIdeal, e: u32) -> Self {
        if e == 0 {
            Self::unit()
        } else {
            IdealFactorization { factors: vec![(p, e)] }
        }
    }

    /// The ideal `(m)` of Z.
    pub fn rational(m: u64) -> Self {
        assert!(m >= 1, "the zero ideal has no factorization");
        IdealFactorization {
            factors: arith::factorize(m)
                .into_iter()
                .map(|(p, e)| (PrimeIdeal::rational(p), e))
                .collect(),
        }
    }

    pub fn factors(&self) -> &[(PrimeIdeal, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn norm(&self) -> u64 {
        self.factors.iter().map(|(p, e)| p.norm().pow(*e)).product()
    }

    pub fn ord(&self, p: &PrimeIdeal) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = &PrimeIdeal> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.factors.iter().all(|(p, e)| other.ord(p) >= *e)
    }

    fn merge(&self, other: &Self, pick: impl Fn(u32, u32) -> u32) -> Self {
        let mut map: BTreeMap<PrimeIdeal, (u32, u32)> = BTreeMap::new();
        for (p, e) in &self.factors {
            map.entry(p.clone()).or_default().0 = *e;
        }
        for (p, e) in &other.factors {
            map.entry(p.clone()).or_default().1 = *e;
        }
        IdealFactorization {
            factors: map
                .into_iter()
                .map(|(p, (a, b))| (p, pick(a, b)))
                .filter(|(_, e)| *e > 0)
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.merge(other, u32::min)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.merge(other, u32::max)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a + b)
    }

    pub fn is_coprime_to(&self, other: &Self) -> bool {
        self.gcd(other).is_unit()
    }
}

impl Ord for IdealFactorization {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm().cmp(&other.norm()).then_with(|| {
            let a: Vec<_> = self.factors.iter().map(|(p, e)| (p, *e)).collect();
            let b: Vec<_> = other.factors.iter().map(|(p, e)| (p, *e)).collect();
            a.cmp(&b)
        })
    }
}

impl PartialOrd for IdealFactorization {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IdealFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "O_F");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A number field described only by its degree, discriminant, archimedean
/// places and a table of how rational primes split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub degree: u32,
    pub discriminant_norm: u64,
    pub real_places: u32,
    pub complex_places: u32,
    /// Rational prime -> prime ideals above it. When the degree is 1 a
    /// missing entry means `(p)` itself.
    pub splitting: BTreeMap<u64, Vec<PrimeIdeal>>,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self::rationals()
    }
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec {
            degree: 1,
            discriminant_norm: 1,
            real_places: 1,
            complex_places: 0,
            splitting: BTreeMap::new(),
        }
    }

    pub fn new(
        degree: u32,
        discriminant_norm: u64,
        real_places: u32,
        complex_places: u32,
        splitting: BTreeMap<u64, Vec<PrimeIdeal>>,
    ) -> Result<Self> {
        let field = FieldSpec {
            degree,
            discriminant_norm,
            real_places,
            complex_places,
            splitting,
        };
        field.validate()?;
        Ok(field)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 || self.discriminant_norm == 0 {
            return Err(Error::InvalidField("degree and discriminant must be positive".into()));
        }
        if self.real_places + 2 * self.complex_places != self.degree {
            return Err(Error::InvalidField(format!(
                "r1 + 2 r2 = {} does not equal the degree {}",
                self.real_places + 2 * self.complex_places,
                self.degree
            )));
        }
        for (p, ideals) in &self.splitting {
            if ideals.is_empty() {
                return Err(Error::InvalidField(format!("no primes listed above {p}")));
            }
            let total: u32 = ideals.iter().map(|q| q.f).sum();
            if total > self.degree {
                return Err(Error::InvalidField(format!(
                    "residue degrees above {p} sum to {total} > {}",
                    self.degree
                )));
            }
            for (i, q) in ideals.iter().enumerate() {
                if q.p != *p || q.index != i as u32 {
                    return Err(Error::InvalidField(format!("prime {q} listed under {p} at position {i}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    /// Local degrees `d(v)` of the archimedean places, real places first.
    pub fn place_degrees(&self) -> Vec<u32> {
        std::iter::repeat(1)
            .take(self.real_places as usize)
            .chain(std::iter::repeat(2).take(self.complex_places as usize))
            .collect()
    }

    pub fn primes_above(&self, p: u64) -> Result<Cow<'_, [PrimeIdeal]>> {
        match self.splitting.get(&p) {
            Some(v) => Ok(Cow::Borrowed(v.as_slice())),
            None if self.is_rational() => Ok(Cow::Owned(vec![PrimeIdeal::rational(p)])),
            None => Err(Error::MissingSplitting(p)),
        }
    }

    /// All prime ideals of norm `<= x`, ordered by norm.
    pub fn prime_ideals_up_to(&self, x: u64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for p in arith::primes_up_to(x) {
            for q in self.primes_above(p)?.iter() {
                if q.norm() <= x {
                    out.push(q.clone());
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Every integral ideal of norm `<= x` ordered by `(norm, factorization)`.
/// Includes the unit ideal.
pub fn ideals_up_to(field: &FieldSpec, x: u64) -> Result<Vec<IdealFactorization>> {
    let primes = field.prime_ideals_up_to(x)?;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    extend(&primes, 0, 1, x, &mut stack, &mut out);
    out.sort();
    Ok(out)
}

fn extend(
    primes: &[PrimeIdeal],
    start: usize,
    norm: u64,
    x: u64,
    stack: &mut Vec<(PrimeIdeal, u32)>,
    out: &mut Vec<IdealFactorization>,
) {
    out.push(IdealFactorization { factors: stack.clone() });
    for i in start..primes.len() {
        let pn = primes[i].norm();
        if norm.saturating_mul(pn) > x {
            break;
        }
        let mut e = 1;
        let mut m = norm * pn;
        while m <= x {
            stack.push((primes[i].clone(), e));
            extend(primes, i + 1, m, x, stack, out);
            stack.pop();
            e += 1;
            m = match m.checked_mul(pn) {
                Some(v) => v,
                None => break,
            };
        }
    }
}
