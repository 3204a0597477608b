//! Sample-based estimation of `O_B` through a minimum-weight perfect matching.
//!
//! From paired samples `x[..n]`, `y[..n]` two bivariate samples are formed:
//! `A_i = (x_i, y_i)` from the first half and `B_j = (y_j, x_j)` (swapped) from
//! the second half. All `n` points are matched in pairs so that the total
//! Euclidean length is minimal, and the count `n_c` of pairs joining an
//! `A` point to a `B` point gives the statistic `min{1, 4 n_c / n}`.
//!
//! Indices in this module are 0-based: `A` occupies `0..n/2` and `B`
//! occupies `n/2..n`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::overlap::{Measure, Method, OverlapEstimate};

/// Largest `n` solved exactly by default.
pub const EXACT_MAX_N: usize = 14;
/// Hard ceiling for the exhaustive solver (state table has `2^n` entries).
pub const EXACT_LIMIT: usize = 24;

const IMPROVEMENT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossSamples {
    pub a_points: Vec<(f64, f64)>,
    pub b_points: Vec<(f64, f64)>,
    /// The inputs had odd length and their last element was dropped.
    pub truncated: bool,
}

impl CrossSamples {
    /// Total number of points `n`.
    pub fn len(&self) -> usize {
        self.a_points.len() + self.b_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_points.is_empty()
    }

    fn points(&self) -> impl Iterator<Item = &(f64, f64)> {
        self.a_points.iter().chain(&self.b_points)
    }
}

/// Split paired samples into the `A` and swapped `B` halves.
pub fn build_cross_samples(x_samples: &[f64], y_samples: &[f64]) -> Result<CrossSamples> {
    if x_samples.len() != y_samples.len() {
        return Err(invalid(format!(
            "sample lengths differ: {} vs {}",
            x_samples.len(),
            y_samples.len()
        )));
    }
    let mut n = x_samples.len();
    let truncated = n % 2 == 1;
    if truncated {
        n -= 1;
    }
    if n < 4 {
        return Err(Error::InsufficientData { needed: 4, got: n });
    }
    let half = n / 2;
    let a_points = (0..half).map(|i| (x_samples[i], y_samples[i])).collect();
    let b_points = (half..n).map(|j| (y_samples[j], x_samples[j])).collect();
    Ok(CrossSamples {
        a_points,
        b_points,
        truncated,
    })
}

/// Dense symmetric `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self { n, data }
    }

    /// Euclidean distances between planar points.
    pub fn from_points(points: &[(f64, f64)]) -> Self {
        Self::from_fn(points.len(), |i, j| euclidean(points[i], points[j]))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

#[inline]
fn euclidean(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Distances between all points of `A` followed by `B`.
pub fn distance_matrix(cs: &CrossSamples) -> DistanceMatrix {
    let pts: Vec<(f64, f64)> = cs.points().copied().collect();
    DistanceMatrix::from_points(&pts)
}

/// The cross block read literally as `M(i, n/2 + j) = d(A_j, B_j)`, which
/// depends on `j` only. Within-sample blocks are unchanged.
pub fn distance_matrix_literal(cs: &CrossSamples) -> DistanceMatrix {
    let half = cs.a_points.len();
    let pts: Vec<(f64, f64)> = cs.points().copied().collect();
    DistanceMatrix::from_fn(pts.len(), |i, j| {
        // i < j here, so a cross entry always has i in A and j in B.
        if i < half && j >= half {
            let k = j - half;
            euclidean(cs.a_points[k], cs.b_points[k])
        } else {
            euclidean(pts[i], pts[j])
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingResult {
    /// `permutation[i]` is the partner of point `i`.
    pub permutation: Vec<usize>,
    pub total_distance: f64,
    /// Number of matched pairs with one end in `A` and the other in `B`.
    pub n_cross: usize,
    /// `4 n_cross / n` before clamping.
    pub raw_statistic: f64,
    /// `min{1, 4 n_cross / n}`
    pub statistic: f64,
    /// The matching is provably optimal.
    pub exact: bool,
}

impl MatchingResult {
    fn from_partners(m: &DistanceMatrix, partner: Vec<usize>, exact: bool) -> Result<Self> {
        check_involution(&partner)?;
        let n = partner.len();
        let half = n / 2;
        let total_distance = (0..n)
            .filter(|&i| i < partner[i])
            .map(|i| m.get(i, partner[i]))
            .sum();
        let n_cross = (0..half).filter(|&i| partner[i] >= half).count();
        let raw_statistic = 4.0 * n_cross as f64 / n as f64;
        Ok(Self {
            permutation: partner,
            total_distance,
            n_cross,
            raw_statistic,
            statistic: raw_statistic.min(1.0),
            exact,
        })
    }

    /// Matched pairs `(i, j)` with `i < j`, in increasing order of `i`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.permutation
            .iter()
            .enumerate()
            .filter(|(i, j)| i < j)
            .map(|(i, &j)| (i, j))
            .collect()
    }
}

fn check_involution(partner: &[usize]) -> Result<()> {
    let n = partner.len();
    for (i, &j) in partner.iter().enumerate() {
        if j >= n || j == i || partner[j] != i {
            return Err(Error::NumericalIntegrity(format!(
                "matching is not a fixed-point-free involution at index {i}"
            )));
        }
    }
    Ok(())
}

fn check_even(n: usize) -> Result<()> {
    if n % 2 == 1 || n < 4 {
        return Err(invalid(format!(
            "perfect matching needs an even number of at least 4 points, got {n}"
        )));
    }
    Ok(())
}

/// Exact minimum-weight perfect matching by dynamic programming over subsets.
///
/// The lowest unmatched index is always paired first and partners are tried
/// in increasing order with strict improvement, so among equal-cost
/// matchings the lexicographically smallest pair list wins.
pub fn exact_matching(m: &DistanceMatrix) -> Result<MatchingResult> {
    let n = m.len();
    check_even(n)?;
    if n > EXACT_LIMIT {
        return Err(invalid(format!(
            "exhaustive matching is limited to {EXACT_LIMIT} points, got {n}"
        )));
    }
    let full = (1usize << n) - 1;
    let mut cost = vec![f64::INFINITY; full + 1];
    let mut choice = vec![0u8; full + 1];
    cost[0] = 0.0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = f64::INFINITY;
        let mut best_j = 0;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let c = m.get(i, j) + cost[rest & !(1 << j)];
            if c < best {
                best = c;
                best_j = j;
            }
        }
        cost[mask] = best;
        choice[mask] = best_j as u8;
    }
    let mut partner = vec![0; n];
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask] as usize;
        partner[i] = j;
        partner[j] = i;
        mask &= !(1 << i) & !(1 << j);
    }
    MatchingResult::from_partners(m, partner, true)
}

/// Greedy nearest-pair construction followed by 2-opt pair exchanges until
/// no exchange shortens the matching. The result is a local optimum only.
pub fn heuristic_matching(m: &DistanceMatrix) -> Result<MatchingResult> {
    let n = m.len();
    check_even(n)?;
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    candidates.sort_by(|&(a, b), &(c, d)| {
        m.get(a, b)
            .total_cmp(&m.get(c, d))
            .then((a, b).cmp(&(c, d)))
    });
    let mut partner = vec![usize::MAX; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for (i, j) in candidates {
        if partner[i] == usize::MAX && partner[j] == usize::MAX {
            partner[i] = j;
            partner[j] = i;
            pairs.push((i, j));
            if pairs.len() == n / 2 {
                break;
            }
        }
    }

    while two_opt_pass(m, &mut pairs) {}
    for &(i, j) in &pairs {
        partner[i] = j;
        partner[j] = i;
    }
    MatchingResult::from_partners(m, partner, false)
}

#[inline]
fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// One sweep of 2-opt exchanges; true if anything improved.
fn two_opt_pass(m: &DistanceMatrix, pairs: &mut [(usize, usize)]) -> bool {
    let cost = |a: usize, b: usize| m.get(a, b);
    let mut improved = false;
    for p in 0..pairs.len() {
        for q in (p + 1)..pairs.len() {
            let (a, b) = pairs[p];
            let (c, d) = pairs[q];
            let current = cost(a, b) + cost(c, d);
            let swap_ac = cost(a, c) + cost(b, d);
            let swap_ad = cost(a, d) + cost(b, c);
            if swap_ac <= swap_ad && swap_ac < current - IMPROVEMENT_EPS {
                pairs[p] = ordered(a, c);
                pairs[q] = ordered(b, d);
                improved = true;
            } else if swap_ad < current - IMPROVEMENT_EPS {
                pairs[p] = ordered(a, d);
                pairs[q] = ordered(b, c);
                improved = true;
            }
        }
    }
    improved
}

/// Exact for `n <= exact_max_n`, heuristic above.
pub fn min_weight_matching_with(m: &DistanceMatrix, exact_max_n: usize) -> Result<MatchingResult> {
    check_even(m.len())?;
    if m.len() <= exact_max_n.min(EXACT_LIMIT) {
        exact_matching(m)
    } else {
        heuristic_matching(m)
    }
}

pub fn min_weight_matching(m: &DistanceMatrix) -> Result<MatchingResult> {
    min_weight_matching_with(m, EXACT_MAX_N)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossmatchOptions {
    /// Use the literal cross block `d(A_j, B_j)`; see [`distance_matrix_literal`].
    pub literal_matrix: bool,
    pub exact_max_n: usize,
}

impl Default for CrossmatchOptions {
    fn default() -> Self {
        Self {
            literal_matrix: false,
            exact_max_n: EXACT_MAX_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossmatchEstimate {
    pub estimate: OverlapEstimate,
    pub matching: MatchingResult,
    pub truncated: bool,
}

/// `O_B` estimate `min{1, 4 n_c / n}` straight from two samples.
pub fn crossmatch_ob_estimate(
    x_samples: &[f64],
    y_samples: &[f64],
    opts: &CrossmatchOptions,
) -> Result<CrossmatchEstimate> {
    let cs = build_cross_samples(x_samples, y_samples)?;
    let m = if opts.literal_matrix {
        distance_matrix_literal(&cs)
    } else {
        distance_matrix(&cs)
    };
    let matching = min_weight_matching_with(&m, opts.exact_max_n)?;
    let estimate =
        OverlapEstimate::deterministic(Measure::Ob, Method::Matching, matching.statistic, cs.len());
    Ok(CrossmatchEstimate {
        estimate,
        matching,
        truncated: cs.truncated,
    })
}
