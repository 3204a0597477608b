//! Overlap measures between two densities.
//!
//! * `O_M`: expected Metropolis–Hastings acceptance when a draw from `p1`
//!   proposes to replace a draw from `p0`; equivalently
//!   `∫∫ min{p0(x)p1(y), p0(y)p1(x)} dx dy`.
//! * `OVL`: `∫ min{p0, p1}`.
//! * `O_B`: the same construction with Barker's acceptance function.
//! * `O_C`: `2 ∫ p0 p1 / (p0 + p1)`, the large-sample crossmatch limit.

use serde::Serialize;

use crate::density::DensityModel;
use crate::error::{invalid, Error, Result};
use crate::normal;
use crate::quadrature::{check_grid, windows_disjoint, Lattice};
use crate::rng::Stream;

/// Default Monte Carlo sample size.
pub const DEFAULT_DRAWS: usize = 100_000;
/// Smallest accepted Monte Carlo sample size.
pub const MIN_DRAWS: usize = 100;
/// Largest round-off excursion outside `[0, 1]` that is silently clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Measure {
    #[serde(rename = "OM")]
    Om,
    #[serde(rename = "OVL")]
    Ovl,
    #[serde(rename = "OB")]
    Ob,
    #[serde(rename = "OC")]
    Oc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
    /// Sample-based minimum-weight matching statistic.
    Matching,
    /// Likelihood-ratio set decomposition.
    YoudenDecomposition,
}

/// One overlap value with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapEstimate {
    pub measure: Measure,
    pub method: Method,
    pub value: f64,
    /// Monte Carlo standard error; zero for deterministic methods.
    pub std_error: f64,
    /// Grid points per axis, draws, or sample size depending on `method`.
    pub size: usize,
    pub seed: Option<u64>,
    /// Set when the two integration windows do not intersect.
    pub degenerate_support: bool,
    /// Lattice points or draws skipped because of a zero denominator.
    pub skipped: usize,
}

impl OverlapEstimate {
    pub(crate) fn deterministic(measure: Measure, method: Method, value: f64, size: usize) -> Self {
        Self {
            measure,
            method,
            value,
            std_error: 0.0,
            size,
            seed: None,
            degenerate_support: false,
            skipped: 0,
        }
    }

    fn degenerate(measure: Measure, method: Method, size: usize) -> Self {
        Self {
            degenerate_support: true,
            ..Self::deterministic(measure, method, 0.0, size)
        }
    }
}

/// Clamp round-off excursions below [`CLAMP_TOLERANCE`]; reject anything larger.
pub fn unit_interval(value: f64, what: &str) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else if value < 0.0 && value > -CLAMP_TOLERANCE {
        Ok(0.0)
    } else if value > 1.0 && value < 1.0 + CLAMP_TOLERANCE {
        Ok(1.0)
    } else {
        Err(Error::NumericalIntegrity(format!(
            "{what} = {value} lies outside [0, 1]"
        )))
    }
}

/// `O_M` for two normals with common `sigma` whose means differ by `theta`.
pub fn q_normal_closed_form(theta: f64, sigma: f64) -> Result<OverlapEstimate> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !theta.is_finite() {
        return Err(invalid(format!("theta must be finite, got {theta}")));
    }
    let value = q_normal(theta, sigma);
    Ok(OverlapEstimate::deterministic(
        Measure::Om,
        Method::ClosedForm,
        value,
        0,
    ))
}

/// `2 (1 - Φ(|θ| / (σ √2)))` without validation.
pub(crate) fn q_normal(theta: f64, sigma: f64) -> f64 {
    2.0 * normal::sf(theta.abs() / (sigma * std::f64::consts::SQRT_2))
}

/// Metropolis–Hastings acceptance probability for replacing `x ~ p0` with `y ~ p1`.
pub fn mh_acceptance(x: f64, y: f64, p0: &DensityModel, p1: &DensityModel) -> Result<f64> {
    let (p0x, p0y, p1x, p1y) = (p0.pdf(x), p0.pdf(y), p1.pdf(x), p1.pdf(y));
    if (p1y * p0x).is_nan() || p1y * p0x <= 0.0 {
        return Err(Error::DegenerateSupport(format!(
            "p1({y}) * p0({x}) is zero"
        )));
    }
    Ok(mh_ratio(p0x, p0y, p1x, p1y))
}

#[inline]
fn mh_ratio(p0x: f64, p0y: f64, p1x: f64, p1y: f64) -> f64 {
    let ratio = (p0y / p1y) * (p1x / p0x);
    if ratio >= 1.0 {
        1.0
    } else {
        ratio
    }
}

/// Barker acceptance `a / (a + b)` with `a = p0(y)p1(x)`, `b = p0(x)p1(y)`;
/// `None` when both products vanish.
#[inline]
fn barker(p0x: f64, p0y: f64, p1x: f64, p1y: f64) -> Option<f64> {
    let a = p0y * p1x;
    let b = p0x * p1y;
    let s = a + b;
    (s > 0.0).then(|| a / s)
}

/// `O_M` by trapezoid rule on an `n_grid × n_grid` lattice.
pub fn om_quadrature(
    p0: &DensityModel,
    p1: &DensityModel,
    n_grid: usize,
) -> Result<OverlapEstimate> {
    check_grid(n_grid)?;
    if windows_disjoint(p0, p1) {
        return Ok(OverlapEstimate::degenerate(
            Measure::Om,
            Method::Quadrature,
            n_grid,
        ));
    }
    let lat = Lattice::union(p0, p1, n_grid)?;
    let (f, g) = (lat.eval(p0), lat.eval(p1));
    let w = &lat.weights;
    let mut total = 0.0;
    for i in 0..n_grid {
        let mut row = 0.0;
        for j in 0..n_grid {
            row += w[j] * (f[i] * g[j]).min(f[j] * g[i]);
        }
        total += w[i] * row;
    }
    let value = unit_interval(total, "O_M quadrature")?;
    Ok(OverlapEstimate::deterministic(
        Measure::Om,
        Method::Quadrature,
        value,
        n_grid,
    ))
}

/// `O_B` by trapezoid rule on an `n_grid × n_grid` lattice.
pub fn ob_quadrature(
    p0: &DensityModel,
    p1: &DensityModel,
    n_grid: usize,
) -> Result<OverlapEstimate> {
    check_grid(n_grid)?;
    if windows_disjoint(p0, p1) {
        return Ok(OverlapEstimate::degenerate(
            Measure::Ob,
            Method::Quadrature,
            n_grid,
        ));
    }
    let lat = Lattice::union(p0, p1, n_grid)?;
    let (f, g) = (lat.eval(p0), lat.eval(p1));
    let w = &lat.weights;
    let mut total = 0.0;
    let mut skipped = 0;
    for i in 0..n_grid {
        let mut row = 0.0;
        for j in 0..n_grid {
            // x = node i, y = node j
            match barker(f[i], f[j], g[i], g[j]) {
                Some(acc) => row += w[j] * 2.0 * acc * f[i] * g[j],
                None => skipped += 1,
            }
        }
        total += w[i] * row;
    }
    let value = unit_interval(total, "O_B quadrature")?;
    Ok(OverlapEstimate {
        skipped,
        ..OverlapEstimate::deterministic(Measure::Ob, Method::Quadrature, value, n_grid)
    })
}

/// `OVL = ∫ min{p0, p1}` by one-dimensional trapezoid rule.
pub fn ovl_quadrature(
    p0: &DensityModel,
    p1: &DensityModel,
    n_grid: usize,
) -> Result<OverlapEstimate> {
    check_grid(n_grid)?;
    if windows_disjoint(p0, p1) {
        return Ok(OverlapEstimate::degenerate(
            Measure::Ovl,
            Method::Quadrature,
            n_grid,
        ));
    }
    let lat = Lattice::union(p0, p1, n_grid)?;
    let (f, g) = (lat.eval(p0), lat.eval(p1));
    let mins: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a.min(*b)).collect();
    let value = unit_interval(lat.integrate(&mins), "OVL quadrature")?;
    Ok(OverlapEstimate::deterministic(
        Measure::Ovl,
        Method::Quadrature,
        value,
        n_grid,
    ))
}

/// `O_C = 2 ∫ p0 p1 / (p0 + p1)` by one-dimensional trapezoid rule.
pub fn oc_quadrature(
    p0: &DensityModel,
    p1: &DensityModel,
    n_grid: usize,
) -> Result<OverlapEstimate> {
    check_grid(n_grid)?;
    if windows_disjoint(p0, p1) {
        return Ok(OverlapEstimate::degenerate(
            Measure::Oc,
            Method::Quadrature,
            n_grid,
        ));
    }
    let lat = Lattice::union(p0, p1, n_grid)?;
    let (f, g) = (lat.eval(p0), lat.eval(p1));
    let mut skipped = 0;
    let vals: Vec<f64> = f
        .iter()
        .zip(&g)
        .map(|(a, b)| {
            let s = a + b;
            if s > 0.0 {
                2.0 * a * b / s
            } else {
                skipped += 1;
                0.0
            }
        })
        .collect();
    let value = unit_interval(lat.integrate(&vals), "O_C quadrature")?;
    Ok(OverlapEstimate {
        skipped,
        ..OverlapEstimate::deterministic(Measure::Oc, Method::Quadrature, value, n_grid)
    })
}

fn check_draws(n_draws: usize) -> Result<()> {
    if n_draws < MIN_DRAWS {
        return Err(invalid(format!(
            "need at least {MIN_DRAWS} Monte Carlo draws, got {n_draws}"
        )));
    }
    Ok(())
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt() / n.sqrt())
}

/// Paired draws `X ~ p0` (stream 0) and `Y ~ p1` (stream 1).
fn paired_draws<'a>(
    p0: &'a DensityModel,
    p1: &'a DensityModel,
    n: usize,
    seed: u64,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    let mut xs = Stream::with_stream(seed, 0);
    let mut ys = Stream::with_stream(seed, 1);
    (0..n).map(move |_| (p0.sample(&mut xs), p1.sample(&mut ys)))
}

/// `O_M` as the mean Metropolis–Hastings acceptance over `X ~ p0`, `Y ~ p1`.
pub fn om_monte_carlo(
    p0: &DensityModel,
    p1: &DensityModel,
    n_draws: usize,
    seed: u64,
) -> Result<OverlapEstimate> {
    check_draws(n_draws)?;
    let mut alphas = Vec::with_capacity(n_draws);
    for (x, y) in paired_draws(p0, p1, n_draws, seed) {
        let (p0x, p0y, p1x, p1y) = (p0.pdf(x), p0.pdf(y), p1.pdf(x), p1.pdf(y));
        if (p1y * p0x).is_nan() || p1y * p0x <= 0.0 {
            return Err(Error::DegenerateSupport(format!(
                "draw pair ({x}, {y}) has zero proposal density"
            )));
        }
        alphas.push(mh_ratio(p0x, p0y, p1x, p1y));
    }
    let (mean, se) = mean_and_se(&alphas);
    Ok(OverlapEstimate {
        measure: Measure::Om,
        method: Method::MonteCarlo,
        value: unit_interval(mean, "O_M Monte Carlo")?,
        std_error: se,
        size: n_draws,
        seed: Some(seed),
        degenerate_support: false,
        skipped: 0,
    })
}

/// `O_B` as twice the mean Barker acceptance over `X ~ p0`, `Y ~ p1`.
pub fn ob_monte_carlo(
    p0: &DensityModel,
    p1: &DensityModel,
    n_draws: usize,
    seed: u64,
) -> Result<OverlapEstimate> {
    check_draws(n_draws)?;
    let mut skipped = 0;
    let vals: Vec<f64> = paired_draws(p0, p1, n_draws, seed)
        .map(
            |(x, y)| match barker(p0.pdf(x), p0.pdf(y), p1.pdf(x), p1.pdf(y)) {
                Some(acc) => 2.0 * acc,
                None => {
                    skipped += 1;
                    0.0
                }
            },
        )
        .collect();
    let (mean, se) = mean_and_se(&vals);
    Ok(OverlapEstimate {
        measure: Measure::Ob,
        method: Method::MonteCarlo,
        value: unit_interval(mean, "O_B Monte Carlo")?,
        std_error: se,
        size: n_draws,
        seed: Some(seed),
        degenerate_support: false,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::normal_density;
    use crate::quadrature::{DEFAULT_GRID_1D, DEFAULT_GRID_2D};

    fn n(mean: f64) -> DensityModel {
        normal_density(mean, 1.0).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(q_normal_closed_form(0.0, 1.0).unwrap().value, 1.0);
        let q = q_normal_closed_form(0.164, 1.0).unwrap();
        assert_eq!(q.method, Method::ClosedForm);
        assert!((q.value - 0.91).abs() < 0.005);
        assert!((q.value - 0.907_679_874_686_780_1).abs() < 1e-12);
        assert!((q_normal_closed_form(0.9539, 1.0).unwrap().value - 0.5).abs() < 1e-3);
        assert_eq!(
            q_normal_closed_form(-0.7, 2.0).unwrap().value,
            q_normal_closed_form(0.7, 2.0).unwrap().value
        );
    }

    #[test]
    fn closed_form_rejects_bad_sigma() {
        assert!(matches!(
            q_normal_closed_form(1.0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(q_normal_closed_form(1.0, -2.0).is_err());
    }

    #[test]
    fn unit_interval_clamps_only_round_off() {
        assert_eq!(unit_interval(1.0 + 1e-13, "x").unwrap(), 1.0);
        assert_eq!(unit_interval(-1e-13, "x").unwrap(), 0.0);
        assert!(matches!(
            unit_interval(1.0 + 1e-9, "x"),
            Err(Error::NumericalIntegrity(_))
        ));
        assert!(unit_interval(-1e-9, "x").is_err());
    }

    #[test]
    fn mh_acceptance_cases() {
        let (a, b) = (n(0.0), n(1.0));
        assert_eq!(mh_acceptance(0.3, 0.3, &a, &b).unwrap(), 1.0);
        assert_eq!(mh_acceptance(-2.0, 1.5, &a, &n(0.0)).unwrap(), 1.0);
        let v = mh_acceptance(0.0, 1.0, &a, &b).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-12, "{v}");
        let reverse = mh_acceptance(1.0, 0.0, &a, &b).unwrap();
        assert_eq!(reverse, 1.0);
    }

    #[test]
    fn mh_acceptance_zero_denominator() {
        let a = crate::density::kde_fit(&[0.0, 0.1], Some(0.01)).unwrap();
        let b = n(0.0);
        assert!(matches!(
            mh_acceptance(500.0, 0.0, &a, &b),
            Err(Error::DegenerateSupport(_))
        ));
    }

    #[test]
    fn quadrature_identical_densities() {
        let q = om_quadrature(&n(0.0), &n(0.0), DEFAULT_GRID_2D).unwrap();
        assert!((q.value - 1.0).abs() < 1e-6);
        assert_eq!(q.std_error, 0.0);
        assert!(
            (ovl_quadrature(&n(0.0), &n(0.0), DEFAULT_GRID_1D)
                .unwrap()
                .value
                - 1.0)
                .abs()
                < 1e-8
        );
        assert!(
            (ob_quadrature(&n(0.0), &n(0.0), DEFAULT_GRID_2D)
                .unwrap()
                .value
                - 1.0)
                .abs()
                < 1e-6
        );
        assert!(
            (oc_quadrature(&n(0.0), &n(0.0), DEFAULT_GRID_1D)
                .unwrap()
                .value
                - 1.0)
                .abs()
                < 1e-6
        );
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let om = om_quadrature(&n(0.0), &n(0.164), DEFAULT_GRID_2D)
            .unwrap()
            .value;
        assert!((om - 0.9077).abs() < 1e-4, "{om}");
        let ovl = ovl_quadrature(&n(0.0), &n(0.164), DEFAULT_GRID_1D)
            .unwrap()
            .value;
        assert!((ovl - 0.9346).abs() < 1e-4, "{ovl}");
        let ovl3 = ovl_quadrature(&n(0.0), &n(3.0), DEFAULT_GRID_1D)
            .unwrap()
            .value;
        assert!((ovl3 - 0.1336).abs() < 1e-4, "{ovl3}");
    }

    #[test]
    fn disjoint_supports() {
        let q = om_quadrature(&n(0.0), &n(20.0), DEFAULT_GRID_2D).unwrap();
        assert!(q.value < 1e-6);
        assert!(q.degenerate_support);
        let c = oc_quadrature(&n(0.0), &n(20.0), DEFAULT_GRID_1D).unwrap();
        assert!(c.value < 1e-6);
    }

    #[test]
    fn harmonic_measures_dominate_min_measures() {
        let (a, b) = (n(0.0), n(0.164));
        let om = om_quadrature(&a, &b, DEFAULT_GRID_2D).unwrap().value;
        let ob = ob_quadrature(&a, &b, DEFAULT_GRID_2D).unwrap().value;
        assert!(om <= ob && ob <= 1.0);
        let c = n(3.0);
        let ovl = ovl_quadrature(&a, &c, DEFAULT_GRID_1D).unwrap().value;
        let oc = oc_quadrature(&a, &c, DEFAULT_GRID_1D).unwrap().value;
        assert!(oc >= ovl);
    }

    #[test]
    fn grid_preconditions() {
        assert!(om_quadrature(&n(0.0), &n(1.0), 100).is_err());
        assert!(ovl_quadrature(&n(0.0), &n(1.0), 50).is_err());
        assert!(om_monte_carlo(&n(0.0), &n(1.0), 99, 1).is_err());
    }

    #[test]
    fn monte_carlo_identical_is_exact() {
        let e = om_monte_carlo(&n(0.0), &n(0.0), 1000, 5).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.std_error, 0.0);
        assert_eq!(e.seed, Some(5));
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = om_monte_carlo(&n(0.0), &n(1.0), 500, 11).unwrap();
        let b = om_monte_carlo(&n(0.0), &n(1.0), 500, 11).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!(a.std_error > 0.0);
    }
}
