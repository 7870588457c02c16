//! Integer partitions and the partition sequences indexed by the prime
//! factors of an ideal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{IdealFactorization, PrimeIdeal};

/// A weakly decreasing sequence of positive parts. The empty partition is
/// the unique partition of 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not nonincreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(k)`; empty when `k = 0`.
    pub fn row(k: u32) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Partition(vec![k])
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Part `i` (0-based), zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `k` with at most `max_length` parts, in
/// lexicographically descending order.
pub fn partitions_of(k: u32, max_length: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(k, k, max_length, &mut current, &mut out);
    out
}

fn fill(remaining: u32, cap: u32, slots: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    if slots == 0 {
        return;
    }
    // The largest part must be big enough for the remaining slots to finish.
    let start = cap.min(remaining);
    for part in (1..=start).rev() {
        if (part as u64) * (slots as u64) < remaining as u64 {
            break;
        }
        current.push(part);
        fill(remaining - part, part, slots - 1, current, out);
        current.pop();
    }
}

/// One partition per prime of an ideal, `|mu_p| = ord_p(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSequence(pub Vec<(PrimeIdeal, Partition)>);

impl PartitionSequence {
    pub fn entries(&self) -> &[(PrimeIdeal, Partition)] {
        &self.0
    }

    /// The sequence `((ord_p(n), 0, ...))_p` that gives the Hecke eigenvalue.
    pub fn single_rows(ideal: &IdealFactorization) -> Self {
        PartitionSequence(
            ideal
                .factors()
                .iter()
                .map(|(p, e)| (p.clone(), Partition::row(*e)))
                .collect(),
        )
    }
}

/// Every partition sequence of `ideal` whose partitions have at most
/// `max_length` parts. Ordered lexicographically by the per-prime orderings
/// of [`partitions_of`], first prime varying slowest.
pub fn partition_sequences(ideal: &IdealFactorization, max_length: usize) -> Vec<PartitionSequence> {
    let per_prime: Vec<(PrimeIdeal, Vec<Partition>)> = ideal
        .factors()
        .iter()
        .map(|(p, e)| (p.clone(), partitions_of(*e, max_length)))
        .collect();
    let mut out = vec![Vec::new()];
    for (p, parts) in &per_prime {
        let mut next = Vec::with_capacity(out.len() * parts.len());
        for prefix in &out {
            for mu in parts {
                let mut seq: Vec<(PrimeIdeal, Partition)> = prefix.clone();
                seq.push((p.clone(), mu.clone()));
                next.push(seq);
            }
        }
        out = next;
    }
    out.into_iter().map(PartitionSequence).collect()
}
