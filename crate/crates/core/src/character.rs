//! Dirichlet characters built from the cyclic decomposition of (Z/qZ)^*.
//!
//! Values are stored as exponents over a common order `m`, so
//! `chi(a) = exp(2 pi i e(a) / m)` and exact comparisons are possible.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// One cyclic factor: residues mod `modulus` with discrete logs of order `order`.
#[derive(Clone, Debug)]
struct Component {
    modulus: u64,
    order: u64,
    log: Vec<Option<u64>>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / arith::gcd(a, b) * b
}

fn primitive_root_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let phi = p - 1;
    let factors = arith::factorize(phi);
    (2..p)
        .find(|&g| factors.iter().all(|&(r, _)| arith::pow_mod(g, phi / r, p) != 1))
        .expect("every prime has a primitive root")
}

fn cyclic_component(modulus: u64, generator: u64, order: u64) -> Component {
    let mut log = vec![None; modulus as usize];
    let mut x = 1 % modulus;
    for k in 0..order {
        log[x as usize] = Some(k);
        x = x * generator % modulus;
    }
    Component { modulus, order, log }
}

fn components(q: u64) -> Vec<Component> {
    let mut out = Vec::new();
    for (p, e) in arith::factorize(q) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => out.push(cyclic_component(4, 3, 2)),
                _ => {
                    let half = pe / 4;
                    let mut sign = vec![None; pe as usize];
                    let mut five = vec![None; pe as usize];
                    for s in 0..2u64 {
                        let mut x = if s == 0 { 1 } else { pe - 1 };
                        for t in 0..half {
                            sign[x as usize] = Some(s);
                            five[x as usize] = Some(t);
                            x = x * 5 % pe;
                        }
                    }
                    out.push(Component { modulus: pe, order: 2, log: sign });
                    out.push(Component { modulus: pe, order: half, log: five });
                }
            }
        } else {
            let mut g = primitive_root_prime(p);
            if e > 1 && arith::pow_mod(g, p - 1, p * p) == 1 {
                g += p;
            }
            out.push(cyclic_component(pe, g, pe / p * (p - 1)));
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Index of the character on each cyclic component of (Z/qZ)^*.
    index: Vec<u64>,
    order: u64,
    exps: Vec<Option<u64>>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletCharacter({})", self.label())
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[{}]", self.label())
    }
}

impl DirichletCharacter {
    /// The orders of the cyclic components that `index` refers to.
    pub fn component_orders(q: u64) -> Vec<u64> {
        components(q).iter().map(|c| c.order).collect()
    }

    pub fn new(q: u64, index: &[u64]) -> Result<Self> {
        if q == 0 {
            return Err(Error::Character("modulus must be positive".into()));
        }
        let comps = components(q);
        if index.len() != comps.len() {
            return Err(Error::Character(format!(
                "modulus {q} has {} cyclic components, got {} indices",
                comps.len(),
                index.len()
            )));
        }
        if let Some((c, j)) = comps.iter().zip(index).find(|(c, j)| **j >= c.order) {
            return Err(Error::Character(format!("index {j} out of range for component of order {}", c.order)));
        }
        let order = comps.iter().fold(1, |m, c| lcm(m, c.order));
        let exps = (0..q)
            .map(|a| {
                if arith::gcd(a, q) != 1 {
                    return None;
                }
                let mut e = 0u64;
                for (c, j) in comps.iter().zip(index) {
                    let l = c.log[(a % c.modulus) as usize].expect("unit has a discrete log");
                    e = (e + j * l % c.order * (order / c.order)) % order;
                }
                Some(e)
            })
            .collect();
        Ok(DirichletCharacter {
            modulus: q,
            index: index.to_vec(),
            order,
            exps,
        })
    }

    pub fn trivial(q: u64) -> Self {
        let n = components(q).len();
        Self::new(q, &vec![0; n]).expect("trivial index is valid")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn label(&self) -> String {
        let idx: Vec<String> = self.index.iter().map(u64::to_string).collect();
        format!("{}:{}", self.modulus, idx.join("."))
    }

    /// Common order `m` of the exponent table.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `chi(a) = exp(2 pi i e / m)`, or `None` when `gcd(a, q) > 1`.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        let q = self.modulus as i64;
        self.exps[a.rem_euclid(q) as usize]
    }

    pub fn value(&self, a: i64) -> Complex64 {
        match self.exponent(a) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => root_of_unity(e, self.order),
        }
    }

    pub fn value_u(&self, a: u64) -> Complex64 {
        match self.exps[(a % self.modulus) as usize] {
            None => Complex64::new(0.0, 0.0),
            Some(e) => root_of_unity(e, self.order),
        }
    }

    pub fn conj(&self) -> Self {
        let orders = Self::component_orders(self.modulus);
        let index: Vec<u64> = self.index.iter().zip(&orders).map(|(j, o)| (o - j) % o).collect();
        Self::new(self.modulus, &index).expect("conjugate index is valid")
    }

    pub fn is_trivial(&self) -> bool {
        self.index.iter().all(|&j| j == 0)
    }

    /// Real-valued, i.e. of order at most 2.
    pub fn is_real(&self) -> bool {
        self.exps.iter().flatten().all(|&e| 2 * e % self.order == 0)
    }

    /// The conductor: the least `d | q` such that `chi` is trivial on units `= 1 mod d`.
    pub fn conductor(&self) -> u64 {
        let q = self.modulus;
        arith::divisors(q)
            .into_iter()
            .find(|&d| {
                (1..q)
                    .step_by(d as usize)
                    .all(|a| self.exps[a as usize].is_none_or(|e| e == 0))
            })
            .unwrap_or(q)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// `chi(-1) = +1` (even) or `-1` (odd).
    pub fn is_even(&self) -> bool {
        self.exponent(-1).is_none_or(|e| e == 0)
    }

    /// `kappa = (1 - chi(-1)) / 2`, the archimedean parameter.
    pub fn parity(&self) -> u32 {
        if self.is_even() {
            0
        } else {
            1
        }
    }

    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus;
        (0..q)
            .map(|a| self.value_u(a) * Complex64::from_polar(1.0, 2.0 * PI * a as f64 / q as f64))
            .sum()
    }

    /// `tau(chi) / (i^kappa sqrt(q))`, of modulus 1 for primitive `chi`.
    pub fn root_number(&self) -> Complex64 {
        let ik = if self.is_even() { Complex64::new(1.0, 0.0) } else { Complex64::i() };
        self.gauss_sum() / (ik * (self.modulus as f64).sqrt())
    }
}

fn root_of_unity(e: u64, m: u64) -> Complex64 {
    // Quarter turns exactly, so real characters have exact values.
    if (4 * e) % m == 0 {
        return match 4 * e / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * e as f64 / m as f64)
}

/// Every character mod `q`, ordered by component index (trivial first).
pub fn all_characters(q: u64) -> Vec<DirichletCharacter> {
    let orders = DirichletCharacter::component_orders(q);
    let mut indices: Vec<Vec<u64>> = vec![Vec::new()];
    for o in &orders {
        indices = indices
            .into_iter()
            .flat_map(|prefix| {
                (0..*o).map(move |j| {
                    let mut v = prefix.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
    }
    indices
        .into_iter()
        .map(|idx| DirichletCharacter::new(q, &idx).expect("enumerated index is valid"))
        .collect()
}

pub fn primitive_characters(q: u64) -> Vec<DirichletCharacter> {
    all_characters(q).into_iter().filter(|c| c.is_primitive()).collect()
}

/// The real primitive character of conductor `q`, if there is exactly one.
pub fn real_primitive_character(q: u64) -> Option<DirichletCharacter> {
    let mut real: Vec<_> = primitive_characters(q).into_iter().filter(|c| c.is_real()).collect();
    (real.len() == 1).then(|| real.remove(0))
}
