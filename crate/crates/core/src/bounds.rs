//! Distances between densities, the inequality suite relating `O_M` to the
//! Hellinger distance and `OVL`, and the likelihood-ratio (Youden-style)
//! decomposition of `O_M`.

use serde::Serialize;

use crate::density::DensityModel;
use crate::error::Result;
use crate::overlap::{self, unit_interval, Measure, Method, OverlapEstimate};
use crate::quadrature::{check_grid, Lattice, DEFAULT_GRID_1D, DEFAULT_GRID_2D};

/// Slack below which an inequality counts as violated rather than noisy.
pub const SLACK_TOLERANCE: f64 = -1e-8;

/// Grid sizes for one- and two-dimensional quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub n_1d: usize,
    pub n_2d: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_1d: DEFAULT_GRID_1D,
            n_2d: DEFAULT_GRID_2D,
        }
    }
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs - lhs`
    pub slack: f64,
}

impl BoundCheck {
    pub fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            satisfied: slack >= SLACK_TOLERANCE,
            slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub hellinger_sq: f64,
    pub d_om: f64,
    pub ovl: f64,
    pub om: f64,
    pub bhattacharyya: f64,
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const HELLINGER_LOWER: &str = "hellinger_lower";
pub const HELLINGER_UPPER: &str = "hellinger_upper";
pub const BHATTACHARYYA_SQ: &str = "om_le_bhattacharyya_sq";
pub const OVL_BOUND: &str = "om_le_ovl_bound";

/// `∫ √(p0 p1)` on the union window.
pub fn bhattacharyya(p0: &DensityModel, p1: &DensityModel, n_grid: usize) -> Result<f64> {
    check_grid(n_grid)?;
    let lat = Lattice::union(p0, p1, n_grid)?;
    let vals: Vec<f64> = lat
        .nodes
        .iter()
        .map(|&x| (p0.pdf(x) * p1.pdf(x)).sqrt())
        .collect();
    Ok(lat.integrate(&vals))
}

/// Hellinger distance `(∫ (√p0 − √p1)²)^{1/2}`, in `[0, √2]`.
pub fn hellinger(p0: &DensityModel, p1: &DensityModel, n_grid: usize) -> Result<f64> {
    check_grid(n_grid)?;
    let lat = Lattice::union(p0, p1, n_grid)?;
    let vals: Vec<f64> = lat
        .nodes
        .iter()
        .map(|&x| {
            let d = p0.pdf(x).sqrt() - p1.pdf(x).sqrt();
            d * d
        })
        .collect();
    Ok(lat.integrate(&vals).sqrt())
}

/// `d = 1 − O_M`.
pub fn om_distance(p0: &DensityModel, p1: &DensityModel, n_grid: usize) -> Result<f64> {
    Ok(1.0 - overlap::om_quadrature(p0, p1, n_grid)?.value)
}

fn hellinger_checks(d: f64, h2: f64) -> [BoundCheck; 2] {
    [
        BoundCheck::new(HELLINGER_LOWER, h2 * (1.0 - h2 / 4.0), d),
        BoundCheck::new(HELLINGER_UPPER, d, 4.0 * h2),
    ]
}

fn ovl_checks(om: f64, bc: f64, ovl: f64) -> [BoundCheck; 2] {
    let tv = 1.0 - ovl;
    [
        BoundCheck::new(BHATTACHARYYA_SQ, om, bc * bc),
        BoundCheck::new(OVL_BOUND, om, (1.0 - tv * tv).powi(2)),
    ]
}

/// `d_H²(1 − d_H²/4) ≤ d` and `d ≤ 4 d_H²`, evaluated and reported.
///
/// The upper inequality does not hold for nearby densities (`d` is first
/// order in a location shift while `d_H²` is second order), so callers
/// should read its verdict rather than rely on it.
pub fn check_hellinger_sandwich(
    p0: &DensityModel,
    p1: &DensityModel,
    grids: GridSpec,
) -> Result<Vec<BoundCheck>> {
    let d = om_distance(p0, p1, grids.n_2d)?;
    let h = hellinger(p0, p1, grids.n_1d)?;
    Ok(hellinger_checks(d, h * h).to_vec())
}

/// `O_M ≤ (∫√(p0 p1))²` and `O_M ≤ (1 − (1 − OVL)²)²`.
pub fn check_ovl_bound(
    p0: &DensityModel,
    p1: &DensityModel,
    grids: GridSpec,
) -> Result<Vec<BoundCheck>> {
    let om = overlap::om_quadrature(p0, p1, grids.n_2d)?.value;
    let bc = bhattacharyya(p0, p1, grids.n_1d)?;
    let ovl = overlap::ovl_quadrature(p0, p1, grids.n_1d)?.value;
    Ok(ovl_checks(om, bc, ovl).to_vec())
}

/// All distances and inequality checks for a pair.
pub fn bounds_report(
    p0: &DensityModel,
    p1: &DensityModel,
    grids: GridSpec,
) -> Result<BoundsReport> {
    let om = overlap::om_quadrature(p0, p1, grids.n_2d)?.value;
    let ovl = overlap::ovl_quadrature(p0, p1, grids.n_1d)?.value;
    let bc = bhattacharyya(p0, p1, grids.n_1d)?;
    let h = hellinger(p0, p1, grids.n_1d)?;
    let h2 = h * h;
    let d = 1.0 - om;
    let mut checks = hellinger_checks(d, h2).to_vec();
    checks.extend(ovl_checks(om, bc, ovl));
    Ok(BoundsReport {
        hellinger_sq: h2,
        d_om: d,
        ovl,
        om,
        bhattacharyya: bc,
        checks,
    })
}

/// Youden index `J(c) = F(c) + 1 − G(c)` for the half-line `(−∞, c)`,
/// with `F` the distribution of `p0` and `G` that of `p1`.
pub fn youden_index(p0: &DensityModel, p1: &DensityModel, cutoff: f64) -> f64 {
    p0.cdf(cutoff) + 1.0 - p1.cdf(cutoff)
}

/// Log likelihood ratio `ln p0 − ln p1` with `p1 = 0` mapped to `+∞`.
fn log_ratio(f: f64, g: f64) -> f64 {
    if g > 0.0 {
        f.ln() - g.ln()
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RatioShape {
    Constant,
    Increasing,
    Decreasing,
    Other,
}

fn ratio_shape(r: &[f64]) -> RatioShape {
    let pairs = || r.windows(2);
    if pairs().all(|w| w[0] == w[1]) {
        RatioShape::Constant
    } else if pairs().all(|w| w[0] < w[1]) {
        RatioShape::Increasing
    } else if pairs().all(|w| w[0] > w[1]) {
        RatioShape::Decreasing
    } else {
        RatioShape::Other
    }
}

/// For each node `y`, the lattice masses `(F(A(y)), G(A(y)))` of
/// `A(y) = {x : r(x) ≤ r(y)}`, ties included.
fn lower_set_masses(r: &[f64], fw: &[f64], gw: &[f64]) -> Vec<(f64, f64)> {
    let mut order: Vec<usize> = (0..r.len()).collect();
    order.sort_by(|&a, &b| r[a].total_cmp(&r[b]).then(a.cmp(&b)));
    let mut out = vec![(0.0, 0.0); r.len()];
    let (mut cf, mut cg) = (0.0, 0.0);
    let mut start = 0;
    while start < order.len() {
        let key = r[order[start]];
        let mut end = start;
        while end < order.len() && r[order[end]] == key {
            cf += fw[order[end]];
            cg += gw[order[end]];
            end += 1;
        }
        for &k in &order[start..end] {
            out[k] = (cf, cg);
        }
        start = end;
    }
    out
}

/// `O_M = ∫ F(A(y)) g(y) dy + ∫ Ḡ(A(y)) f(y) dy` with
/// `A(y) = {x : f(x)/g(x) ≤ f(y)/g(y)}`, `f = p0`, `g = p1`.
///
/// When the likelihood ratio is monotone on the lattice the sets are
/// half-lines and the model distribution functions are used directly;
/// otherwise the sets are built as masks on the lattice.
pub fn om_youden_decomposition(
    p0: &DensityModel,
    p1: &DensityModel,
    n_grid: usize,
) -> Result<OverlapEstimate> {
    check_grid(n_grid)?;
    let lat = Lattice::union(p0, p1, n_grid)?;
    let (f, g) = (lat.eval(p0), lat.eval(p1));
    let r: Vec<f64> = f.iter().zip(&g).map(|(&a, &b)| log_ratio(a, b)).collect();

    let terms: Vec<f64> = match ratio_shape(&r) {
        RatioShape::Constant => g.clone(),
        RatioShape::Decreasing => lat
            .nodes
            .iter()
            .zip(f.iter().zip(&g))
            .map(|(&y, (&fy, &gy))| (1.0 - p0.cdf(y)) * gy + p1.cdf(y) * fy)
            .collect(),
        RatioShape::Increasing => lat
            .nodes
            .iter()
            .zip(f.iter().zip(&g))
            .map(|(&y, (&fy, &gy))| p0.cdf(y) * gy + (1.0 - p1.cdf(y)) * fy)
            .collect(),
        RatioShape::Other => {
            let fw: Vec<f64> = f.iter().zip(&lat.weights).map(|(a, w)| a * w).collect();
            let gw: Vec<f64> = g.iter().zip(&lat.weights).map(|(a, w)| a * w).collect();
            let g_total: f64 = gw.iter().sum();
            lower_set_masses(&r, &fw, &gw)
                .into_iter()
                .zip(f.iter().zip(&g))
                .map(|((fa, ga), (&fy, &gy))| fa * gy + (g_total - ga) * fy)
                .collect()
        }
    };
    let value = unit_interval(lat.integrate(&terms), "O_M Youden decomposition")?;
    Ok(OverlapEstimate::deterministic(
        Measure::Om,
        Method::YoudenDecomposition,
        value,
        n_grid,
    ))
}

/// `F(A) + Ḡ(A)` for `A = {x : p0(x)/p1(x) ≤ 1}` on the lattice, which
/// equals `OVL`.
pub fn ovl_via_likelihood_set(p0: &DensityModel, p1: &DensityModel, n_grid: usize) -> Result<f64> {
    check_grid(n_grid)?;
    let lat = Lattice::union(p0, p1, n_grid)?;
    let (mut fa, mut ga, mut g_total) = (0.0, 0.0, 0.0);
    for (&x, &w) in lat.nodes.iter().zip(&lat.weights) {
        let (f, g) = (p0.pdf(x), p1.pdf(x));
        g_total += w * g;
        if log_ratio(f, g) <= 0.0 {
            fa += w * f;
            ga += w * g;
        }
    }
    Ok(fa + (g_total - ga))
}
