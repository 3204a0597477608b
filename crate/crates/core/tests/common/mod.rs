#![allow(dead_code)]

use overlap_core::crossmatch::DistanceMatrix;
use overlap_core::density::{draw, kde_fit, normal_density, DensityModel};
use overlap_core::rng::Stream;

pub fn normal(mean: f64, sd: f64) -> DensityModel {
    normal_density(mean, sd).unwrap()
}

pub const THETA_GRID: [f64; 7] = [0.0, 0.1, 0.164, 0.5, 1.0, 2.0, 4.0];

pub fn normal_pairs() -> Vec<(String, DensityModel, DensityModel)> {
    THETA_GRID
        .iter()
        .map(|&t| {
            (
                format!("N(0,1) vs N({t},1)"),
                normal(0.0, 1.0),
                normal(t, 1.0),
            )
        })
        .collect()
}

/// Seeded KDE pairs fitted to samples from `N(0,1)` and `N(mu, s²)` with
/// `mu ∈ [0, 3]` and `s ∈ [0.8, 1.25]`.
pub fn kde_pairs(count: usize, seed: u64) -> Vec<(String, DensityModel, DensityModel)> {
    let mut params = Stream::new(seed);
    (0..count)
        .map(|k| {
            let mu = 3.0 * params.uniform();
            let s = 0.8 + 0.45 * params.uniform();
            let base = seed.wrapping_mul(1000).wrapping_add(2 * k as u64);
            let x = draw(&normal(0.0, 1.0), 200, base).unwrap();
            let y = draw(&normal(mu, s), 200, base + 1).unwrap();
            (
                format!("KDE pair {k} (mu={mu:.3}, s={s:.3})"),
                kde_fit(&x, None).unwrap(),
                kde_fit(&y, None).unwrap(),
            )
        })
        .collect()
}

/// Minimum total weight over every perfect matching, by recursion.
pub fn brute_force_min(m: &DistanceMatrix) -> f64 {
    fn go(m: &DistanceMatrix, free: &mut Vec<usize>) -> f64 {
        if free.is_empty() {
            return 0.0;
        }
        let i = free.remove(0);
        let mut best = f64::INFINITY;
        for k in 0..free.len() {
            let j = free.remove(k);
            best = best.min(m.get(i, j) + go(m, free));
            free.insert(k, j);
        }
        free.insert(0, i);
        best
    }
    go(m, &mut (0..m.len()).collect())
}

pub fn random_points(stream: &mut Stream, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (stream.uniform() * 10.0, stream.uniform() * 10.0))
        .collect()
}
