//! Evaluable and sampleable univariate densities.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::normal;
use crate::rng::Stream;

/// Half-width of the normal integration window in standard deviations.
pub const NORMAL_WINDOW_SDS: f64 = 8.0;
/// Padding of the KDE window beyond the extreme samples, in bandwidths.
pub const KDE_WINDOW_BANDWIDTHS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    Normal {
        mean: f64,
        sd: f64,
    },
    /// Gaussian-kernel mixture centred on the samples.
    Kde {
        #[serde(skip)]
        samples: Arc<[f64]>,
        bandwidth: f64,
    },
}

/// An immutable univariate density with an integration window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityModel {
    #[serde(flatten)]
    kind: DensityKind,
    support_lo: f64,
    support_hi: f64,
}

impl DensityModel {
    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    /// Integration window `(lo, hi)`.
    pub fn support(&self) -> (f64, f64) {
        (self.support_lo, self.support_hi)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match &self.kind {
            DensityKind::Normal { mean, sd } => normal::pdf((x - mean) / sd) / sd,
            DensityKind::Kde { samples, bandwidth } => {
                let h = *bandwidth;
                let sum: f64 = samples.iter().map(|s| normal::pdf((x - s) / h)).sum();
                sum / (samples.len() as f64 * h)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match &self.kind {
            DensityKind::Normal { mean, sd } => normal::cdf((x - mean) / sd),
            DensityKind::Kde { samples, bandwidth } => {
                let sum: f64 = samples
                    .iter()
                    .map(|s| normal::cdf((x - s) / bandwidth))
                    .sum();
                sum / samples.len() as f64
            }
        }
    }

    /// Quantile function; only the normal family has one in closed form.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        match &self.kind {
            DensityKind::Normal { mean, sd } => Ok(mean + sd * normal::quantile(p)?),
            DensityKind::Kde { .. } => Err(Error::Domain(
                "quantile is not available for kernel density models".into(),
            )),
        }
    }

    /// One draw from the model using `stream`.
    pub fn sample(&self, stream: &mut Stream) -> f64 {
        match &self.kind {
            DensityKind::Normal { mean, sd } => mean + sd * stream.standard_normal(),
            DensityKind::Kde { samples, bandwidth } => {
                let centre = samples[stream.index(samples.len())];
                centre + bandwidth * stream.standard_normal()
            }
        }
    }

    /// `n` i.i.d. draws, reproducible for a given `(model, n, seed)`.
    pub fn draw(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(invalid("draw count must be at least 1"));
        }
        let mut stream = Stream::new(seed);
        Ok((0..n).map(|_| self.sample(&mut stream)).collect())
    }
}

/// Normal density with the given mean and standard deviation.
pub fn normal_density(mean: f64, sd: f64) -> Result<DensityModel> {
    if !mean.is_finite() {
        return Err(invalid(format!("mean must be finite, got {mean}")));
    }
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(invalid(format!("sd must be positive, got {sd}")));
    }
    Ok(DensityModel {
        kind: DensityKind::Normal { mean, sd },
        support_lo: mean - NORMAL_WINDOW_SDS * sd,
        support_hi: mean + NORMAL_WINDOW_SDS * sd,
    })
}

/// Standard normal quantile; errors outside `(0, 1)`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    normal::quantile(p)
}

/// Silverman's rule of thumb, `1.06 * s * n^(-1/5)`.
pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    1.06 * sample_sd(samples) * (samples.len() as f64).powf(-0.2)
}

pub(crate) fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Fit a Gaussian kernel density estimate.
///
/// Without an explicit bandwidth Silverman's rule is used, which fails for
/// constant samples.
pub fn kde_fit(samples: &[f64], bandwidth: Option<f64>) -> Result<DensityModel> {
    if samples.len() < 2 {
        return Err(Error::Fit(format!(
            "too few samples: need at least 2, got {}",
            samples.len()
        )));
    }
    if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::Fit(format!("non-finite sample {bad}")));
    }
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(invalid(format!("bandwidth must be positive, got {h}"))),
        None => {
            let h = silverman_bandwidth(samples);
            if h.is_nan() || h <= 0.0 {
                return Err(Error::Fit(
                    "zero sample variance; supply an explicit bandwidth".into(),
                ));
            }
            h
        }
    };
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(DensityModel {
        kind: DensityKind::Kde {
            samples: samples.into(),
            bandwidth: h,
        },
        support_lo: lo - KDE_WINDOW_BANDWIDTHS * h,
        support_hi: hi + KDE_WINDOW_BANDWIDTHS * h,
    })
}

/// `n` draws from `model` with the given seed.
pub fn draw(model: &DensityModel, n: usize, seed: u64) -> Result<Vec<f64>> {
    model.draw(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid(m: &DensityModel, n: usize) -> f64 {
        let (lo, hi) = m.support();
        let h = (hi - lo) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                w * m.pdf(lo + i as f64 * h)
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn normal_rejects_bad_sd() {
        for sd in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                normal_density(0.0, sd),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn normal_window_and_mass() {
        let m = normal_density(3.0, 2.0).unwrap();
        assert_eq!(m.support(), (-13.0, 19.0));
        let mass = trapezoid(&m, 1001);
        assert!((0.999_999..=1.000_001).contains(&mass), "{mass}");
        assert_eq!(m.cdf(3.0), 0.5);
    }

    #[test]
    fn normal_quantile_inverts_cdf_on_grid() {
        let m = normal_density(-1.0, 0.7).unwrap();
        for i in 0..20 {
            let x = -4.0 + 0.35 * i as f64;
            let back = m.quantile(m.cdf(x)).unwrap();
            assert!((back - x).abs() < 1e-8, "x={x} back={back}");
        }
    }

    #[test]
    fn kde_needs_two_samples() {
        assert!(matches!(kde_fit(&[0.0], Some(0.5)), Err(Error::Fit(_))));
        assert!(matches!(kde_fit(&[], None), Err(Error::Fit(_))));
    }

    #[test]
    fn kde_constant_samples_need_bandwidth() {
        assert!(matches!(
            kde_fit(&[1.0, 1.0, 1.0], None),
            Err(Error::Fit(_))
        ));
        let m = kde_fit(&[1.0, 1.0, 1.0], Some(0.2)).unwrap();
        assert!((m.pdf(1.0) - normal::pdf(0.0) / 0.2).abs() < 1e-12);
    }

    #[test]
    fn kde_window_and_mass() {
        let samples = [-1.0, 0.5, 0.7, 2.0, 3.5];
        let m = kde_fit(&samples, None).unwrap();
        let h = silverman_bandwidth(&samples);
        assert_eq!(m.support(), (-1.0 - 4.0 * h, 3.5 + 4.0 * h));
        let mass = trapezoid(&m, 4001);
        assert!((mass - 1.0).abs() < 1e-4, "{mass}");
    }

    #[test]
    fn kde_has_no_quantile() {
        let m = kde_fit(&[0.0, 1.0], None).unwrap();
        assert!(m.quantile(0.5).is_err());
    }

    #[test]
    fn draw_zero_is_rejected() {
        let m = normal_density(0.0, 1.0).unwrap();
        assert!(matches!(draw(&m, 0, 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn draw_is_deterministic() {
        let m = normal_density(0.0, 1.0).unwrap();
        let a = draw(&m, 5, 42).unwrap();
        let b = draw(&m, 5, 42).unwrap();
        assert_eq!(
            a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert_ne!(a, draw(&m, 5, 43).unwrap());
    }
}
