//! One-sided normal-mean test and the overlap-based decision rule.
//!
//! Outcomes under the standard treatment follow `N(theta0, sigma²)` and under
//! the new one `N(theta, sigma²)` with `sigma` known. The classical test
//! rejects `theta = theta0` in favour of `theta > theta0` when the sample mean
//! exceeds the critical value. The overlap rule instead accepts the new
//! treatment when `O_M` between the two outcome densities, evaluated at the
//! estimate, drops below a threshold `q0`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::normal;
use crate::overlap::q_normal;
use crate::rng::Stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialConfig {
    pub n: usize,
    pub sigma: f64,
    pub alpha: f64,
    pub q0: f64,
    pub theta0: f64,
}

impl TrialConfig {
    pub fn new(n: usize, sigma: f64, alpha: f64, q0: f64) -> Result<Self> {
        let cfg = Self {
            n,
            sigma,
            alpha,
            q0,
            theta0: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_theta0(mut self, theta0: f64) -> Result<Self> {
        self.theta0 = theta0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.q0 > 0.0 && self.q0 <= 1.0) {
            return Err(invalid(format!("q0 must lie in (0, 1], got {}", self.q0)));
        }
        if !self.theta0.is_finite() {
            return Err(invalid("theta0 must be finite"));
        }
        Ok(())
    }

    /// Standard error of the sample mean, `sigma / sqrt(n)`.
    fn se(&self) -> f64 {
        self.sigma / (self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialDecision {
    pub xbar: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject_h0: bool,
    pub q_at_estimate: f64,
    pub theta_threshold_for_q0: f64,
    pub q_rule_accepts_new: bool,
    /// `1 − Φ((xbar − theta0 − threshold) √n / sigma)`; informational only.
    pub threshold_test_p_value: f64,
}

/// `c = theta0 + (sigma / √n) Φ⁻¹(1 − alpha)`.
pub fn critical_value(cfg: &TrialConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.theta0 + cfg.se() * normal::quantile(1.0 - cfg.alpha)?)
}

/// `p = 1 − Φ((xbar − theta0) √n / sigma)`.
pub fn p_value(xbar: f64, cfg: &TrialConfig) -> Result<f64> {
    cfg.validate()?;
    if !xbar.is_finite() {
        return Err(invalid("xbar must be finite"));
    }
    Ok(normal::sf((xbar - cfg.theta0) / cfg.se()))
}

/// Smallest shift with `O_M < q0`: `sigma √2 Φ⁻¹(1 − q0/2)`.
pub fn theta_threshold(q0: f64, sigma: f64) -> Result<f64> {
    if q0 == 0.0 {
        return Err(Error::Domain("q0 = 0 gives an infinite threshold".into()));
    }
    if !(q0 > 0.0 && q0 <= 1.0) {
        return Err(Error::Domain(format!("q0 must lie in (0, 1], got {q0}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok(sigma * std::f64::consts::SQRT_2 * normal::quantile(1.0 - q0 / 2.0)?)
}

/// Evaluate the classical test and the overlap rule side by side.
pub fn decide(xbar: f64, cfg: &TrialConfig) -> Result<TrialDecision> {
    let c = critical_value(cfg)?;
    let p = p_value(xbar, cfg)?;
    let shift = xbar - cfg.theta0;
    let q = q_normal(shift, cfg.sigma);
    let threshold = theta_threshold(cfg.q0, cfg.sigma)?;
    Ok(TrialDecision {
        xbar,
        critical_value: c,
        p_value: p,
        reject_h0: xbar > c,
        q_at_estimate: q,
        theta_threshold_for_q0: threshold,
        q_rule_accepts_new: shift > 0.0 && q < cfg.q0,
        threshold_test_p_value: normal::sf((shift - threshold) / cfg.se()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantiles {
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub b: usize,
    pub q_tilde: Vec<f64>,
    pub quantiles: Quantiles,
    pub fraction_below_q0: f64,
    pub seed: u64,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Parametric bootstrap of `O_M`.
///
/// Each replication draws `n` outcomes from `N(theta_hat, sigma²)` and
/// recomputes the closed-form overlap at the resampled mean. Replication `r`
/// uses sub-stream `r` of `seed`, so the result does not depend on the order
/// replications are evaluated in.
pub fn parametric_bootstrap(
    theta_hat: f64,
    cfg: &TrialConfig,
    b: usize,
    seed: u64,
) -> Result<BootstrapSummary> {
    cfg.validate()?;
    if b == 0 {
        return Err(invalid("bootstrap needs at least one replication"));
    }
    if !theta_hat.is_finite() {
        return Err(invalid("theta_hat must be finite"));
    }
    let q_tilde: Vec<f64> = (0..b as u64)
        .map(|r| {
            let mut stream = Stream::with_stream(seed, r);
            let sum: f64 = (0..cfg.n)
                .map(|_| theta_hat + cfg.sigma * stream.standard_normal())
                .sum();
            let theta_tilde = sum / cfg.n as f64;
            q_normal(theta_tilde - cfg.theta0, cfg.sigma)
        })
        .collect();
    let mut sorted = q_tilde.clone();
    sorted.sort_by(f64::total_cmp);
    let quantiles = Quantiles {
        p05: quantile_sorted(&sorted, 0.05),
        p50: quantile_sorted(&sorted, 0.50),
        p95: quantile_sorted(&sorted, 0.95),
    };
    let below = q_tilde.iter().filter(|&&q| q < cfg.q0).count();
    Ok(BootstrapSummary {
        b,
        fraction_below_q0: below as f64 / b as f64,
        q_tilde,
        quantiles,
        seed,
    })
}
