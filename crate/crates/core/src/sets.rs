//! Overlap between finite sets.
//!
//! With `S = A ∩ B`: the overlap coefficient `|S| / min(|A|, |B|)`, the
//! Jaccard index `|S| / (|A| + |B| − |S|)`, and `|S| / √(|A||B|)`, the square
//! root of `O_M` between the uniform distributions on `A` and `B`. The last one
//! always lies between the other two.

use std::collections::HashSet;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sizes of two sets and of their intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SetCounts {
    pub size_a: usize,
    pub size_b: usize,
    pub shared: usize,
}

impl SetCounts {
    pub fn new(size_a: usize, size_b: usize, shared: usize) -> Result<Self> {
        if size_a == 0 || size_b == 0 {
            return Err(Error::Domain("set overlap needs two nonempty sets".into()));
        }
        if shared > size_a.min(size_b) {
            return Err(Error::Domain(format!(
                "intersection of {shared} exceeds the smaller set size {}",
                size_a.min(size_b)
            )));
        }
        Ok(Self {
            size_a,
            size_b,
            shared,
        })
    }

    pub fn from_sets<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> Result<Self> {
        Self::new(a.len(), b.len(), a.intersection(b).count())
    }

    pub fn overlap_coefficient(&self) -> f64 {
        self.shared as f64 / self.size_a.min(self.size_b) as f64
    }

    pub fn jaccard(&self) -> f64 {
        self.shared as f64 / (self.size_a + self.size_b - self.shared) as f64
    }

    pub fn om(&self) -> f64 {
        self.shared as f64 / ((self.size_a as f64) * (self.size_b as f64)).sqrt()
    }

    /// `J ≤ O_M ≤ O`.
    pub fn sandwich_holds(&self) -> bool {
        let (j, m, o) = (self.jaccard(), self.om(), self.overlap_coefficient());
        j <= m && m <= o
    }
}

pub fn overlap_coefficient<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> Result<f64> {
    Ok(SetCounts::from_sets(a, b)?.overlap_coefficient())
}

pub fn jaccard<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> Result<f64> {
    Ok(SetCounts::from_sets(a, b)?.jaccard())
}

/// `|A ∩ B| / √(|A||B|)`.
pub fn om_sets<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> Result<f64> {
    Ok(SetCounts::from_sets(a, b)?.om())
}

/// `O_M` for sets from its defining double sum over the union `U`,
/// `√( Σ_{i,j ∈ U} min{1_A(i) 1_B(j), 1_B(i) 1_A(j)} / (|A||B|) )`.
pub fn om_sets_double_sum<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("set overlap needs two nonempty sets".into()));
    }
    let universe: Vec<(bool, bool)> = a.union(b).map(|e| (a.contains(e), b.contains(e))).collect();
    let mut total = 0u64;
    for &(in_a_i, in_b_i) in &universe {
        for &(in_a_j, in_b_j) in &universe {
            let forward = (in_a_i && in_b_j) as u64;
            let backward = (in_b_i && in_a_j) as u64;
            total += forward.min(backward);
        }
    }
    Ok((total as f64 / (a.len() as f64 * b.len() as f64)).sqrt())
}
