//! Fixed trapezoid lattices over integration windows.

use crate::density::DensityModel;
use crate::error::{invalid, Result};

/// Default points per axis for one-dimensional integrals.
pub const DEFAULT_GRID_1D: usize = 2001;
/// Default points per axis for the two-dimensional lattice.
pub const DEFAULT_GRID_2D: usize = 801;
/// Smallest accepted grid.
pub const MIN_GRID: usize = 101;

/// Equally spaced nodes with trapezoid weights.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Lattice {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("lattice needs at least two points"));
        }
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(invalid(format!("empty window [{lo}, {hi}]")));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + i as f64 * h })
            .collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Self { nodes, weights })
    }

    /// Lattice over the union of both model windows.
    pub fn union(p0: &DensityModel, p1: &DensityModel, n: usize) -> Result<Self> {
        let (lo0, hi0) = p0.support();
        let (lo1, hi1) = p1.support();
        Self::new(lo0.min(lo1), hi0.max(hi1), n)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn eval(&self, model: &DensityModel) -> Vec<f64> {
        self.nodes.iter().map(|&x| model.pdf(x)).collect()
    }

    /// Trapezoid sum of already evaluated values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Grid size validation shared by the quadrature estimators.
pub fn check_grid(n_grid: usize) -> Result<()> {
    if n_grid < MIN_GRID || n_grid.is_multiple_of(2) {
        return Err(invalid(format!(
            "grid size must be odd and at least {MIN_GRID}, got {n_grid}"
        )));
    }
    Ok(())
}

/// True when the two integration windows do not intersect.
pub fn windows_disjoint(p0: &DensityModel, p1: &DensityModel) -> bool {
    let (lo0, hi0) = p0.support();
    let (lo1, hi1) = p1.support();
    hi0 < lo1 || hi1 < lo0
}
