//! Command-line interface: argument definitions and command execution.

use std::collections::HashSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{self, GridSpec};
use crate::crossmatch::{self, CrossmatchOptions, EXACT_MAX_N};
use crate::density::{kde_fit, normal_density, DensityModel};
use crate::error::Error;
use crate::input;
use crate::overlap::{self, DEFAULT_DRAWS};
use crate::quadrature::{DEFAULT_GRID_1D, DEFAULT_GRID_2D};
use crate::report::Report;
use crate::sets::{self, SetCounts};
use crate::trial::{self, TrialConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "overlap",
    version,
    about = "Density overlap measures and comparative-trial decisions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All overlap measures and bounds for N(0, σ²) against N(θ, σ²).
    Normal(NormalArgs),
    /// CSV of the closed-form O_M curve `theta,q`.
    Curve(CurveArgs),
    /// Overlap measures estimated from two sample files.
    Samples(SamplesArgs),
    /// One-sided test and overlap rule for an observed mean.
    Trial(TrialArgs),
    /// Overlap between two newline-delimited token sets.
    Sets(SetsArgs),
}

#[derive(Debug, Args, serde::Serialize)]
pub struct GridArgs {
    /// Points for one-dimensional quadrature.
    #[arg(long, default_value_t = DEFAULT_GRID_1D)]
    pub n_grid: usize,
    /// Points per axis for the two-dimensional lattice.
    #[arg(long, default_value_t = DEFAULT_GRID_2D)]
    pub n_grid_2d: usize,
}

impl GridArgs {
    fn grids(&self) -> GridSpec {
        GridSpec {
            n_1d: self.n_grid,
            n_2d: self.n_grid_2d,
        }
    }
}

#[derive(Debug, Args, serde::Serialize)]
pub struct NormalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    pub n_draws: usize,
    /// Seed for the Monte Carlo estimates; they are skipped without one.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct CurveArgs {
    #[arg(allow_hyphen_values = true)]
    pub theta_min: f64,
    #[arg(allow_hyphen_values = true)]
    pub theta_max: f64,
    pub steps: usize,
    #[arg(default_value_t = 1.0)]
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMethod {
    Quad,
    Mc,
    Crossmatch,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct SamplesArgs {
    pub file0: PathBuf,
    pub file1: PathBuf,
    #[arg(long, value_enum, default_value_t = SampleMethod::Quad)]
    pub method: SampleMethod,
    /// KDE bandwidth for the first sample (Silverman's rule if omitted).
    #[arg(long)]
    pub bandwidth0: Option<f64>,
    /// KDE bandwidth for the second sample (Silverman's rule if omitted).
    #[arg(long)]
    pub bandwidth1: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    pub n_draws: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Read the crossmatch cross block literally as d(A_j, B_j).
    #[arg(long)]
    pub literal_matrix: bool,
    /// Largest sample count matched exhaustively.
    #[arg(long, default_value_t = EXACT_MAX_N)]
    pub exact_max_n: usize,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct TrialArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xbar: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub q0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    /// Number of parametric bootstrap replications.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct SetsArgs {
    pub file_a: PathBuf,
    pub file_b: PathBuf,
}

/// What a command prints on success.
#[derive(Debug)]
pub enum Output {
    Json(Report),
    Csv(String),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Json(r) => r.to_json(),
            Output::Csv(s) => s.clone(),
        }
    }
}

/// A failed command with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(e: Error) -> Self {
        match e {
            Error::NumericalIntegrity(_) => e.into(),
            other => Self {
                code: EXIT_DATA,
                message: other.to_string(),
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::Domain(_) => EXIT_USAGE,
            Error::NumericalIntegrity(_) => EXIT_NUMERICAL,
            _ => EXIT_DATA,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Output, CliError>;

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Normal(a) => cmd_normal(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Samples(a) => cmd_samples(a),
        Command::Trial(a) => cmd_trial(a),
        Command::Sets(a) => cmd_sets(a),
    }
}

fn echo<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments are serialisable")
}

fn est(e: &overlap::OverlapEstimate) -> Value {
    serde_json::to_value(e).expect("estimate is serialisable")
}

pub fn cmd_normal(a: &NormalArgs) -> CmdResult {
    let grids = a.grid.grids();
    let p0 = normal_density(0.0, a.sigma)?;
    let p1 = normal_density(a.theta, a.sigma)?;
    let closed = overlap::q_normal_closed_form(a.theta, a.sigma)?;
    let mut warnings = Vec::new();

    let mut om = json!({
        "closed_form": closed.value,
        "closed_form_2dp": (closed.value * 100.0).round() / 100.0,
        "quadrature": est(&overlap::om_quadrature(&p0, &p1, grids.n_2d)?),
        "youden": est(&bounds::om_youden_decomposition(&p0, &p1, grids.n_1d)?),
    });
    let mut ob = json!({ "quadrature": est(&overlap::ob_quadrature(&p0, &p1, grids.n_2d)?) });
    match a.seed {
        Some(seed) => {
            om["monte_carlo"] = est(&overlap::om_monte_carlo(&p0, &p1, a.n_draws, seed)?);
            ob["monte_carlo"] = est(&overlap::ob_monte_carlo(&p0, &p1, a.n_draws, seed)?);
        }
        None => warnings.push("Monte Carlo estimates skipped: no --seed given".to_string()),
    }
    let report = bounds::bounds_report(&p0, &p1, grids)?;
    for c in report.checks.iter().filter(|c| !c.satisfied) {
        warnings.push(format!(
            "inequality {} not satisfied (slack {:.4e})",
            c.name, c.slack
        ));
    }
    let results = json!({
        "om": om,
        "ovl": est(&overlap::ovl_quadrature(&p0, &p1, grids.n_1d)?),
        "ob": ob,
        "oc": est(&overlap::oc_quadrature(&p0, &p1, grids.n_1d)?),
        "bounds": serde_json::to_value(&report).expect("serialisable"),
    });
    Ok(Output::Json(Report::new(
        "normal",
        echo(a),
        results,
        warnings,
    )))
}

pub fn cmd_curve(a: &CurveArgs) -> CmdResult {
    if a.theta_min.is_nan() || a.theta_max.is_nan() || a.theta_min >= a.theta_max {
        return Err(CliError::usage(format!(
            "theta_min ({}) must be below theta_max ({})",
            a.theta_min, a.theta_max
        )));
    }
    if a.steps < 2 {
        return Err(CliError::usage("steps must be at least 2"));
    }
    if !(a.sigma > 0.0 && a.sigma.is_finite()) {
        return Err(CliError::usage("sigma must be positive"));
    }
    let mut out = String::from("theta,q\n");
    let span = a.theta_max - a.theta_min;
    for i in 0..a.steps {
        let theta = if i == a.steps - 1 {
            a.theta_max
        } else {
            a.theta_min + span * i as f64 / (a.steps - 1) as f64
        };
        let q = overlap::q_normal_closed_form(theta, a.sigma)?.value;
        out.push_str(&format!("{theta},{q}\n"));
    }
    Ok(Output::Csv(out))
}

fn fit(samples: &[f64], bandwidth: Option<f64>) -> Result<DensityModel, CliError> {
    kde_fit(samples, bandwidth).map_err(|e| match e {
        Error::InvalidParameter(_) => e.into(),
        other => CliError::data(other),
    })
}

fn bandwidth_of(m: &DensityModel) -> f64 {
    match m.kind() {
        crate::density::DensityKind::Kde { bandwidth, .. } => *bandwidth,
        crate::density::DensityKind::Normal { sd, .. } => *sd,
    }
}

pub fn cmd_samples(a: &SamplesArgs) -> CmdResult {
    if a.method == SampleMethod::Mc && a.seed.is_none() {
        return Err(CliError::usage("--method mc requires --seed"));
    }
    let x = input::read_samples(&a.file0).map_err(CliError::data)?;
    let y = input::read_samples(&a.file1).map_err(CliError::data)?;
    let mut warnings = Vec::new();
    let grids = a.grid.grids();

    let results = match a.method {
        SampleMethod::Crossmatch => {
            let opts = CrossmatchOptions {
                literal_matrix: a.literal_matrix,
                exact_max_n: a.exact_max_n,
            };
            let r = crossmatch::crossmatch_ob_estimate(&x, &y, &opts).map_err(|e| match e {
                Error::InvalidParameter(_) | Error::InsufficientData { .. } => CliError::data(e),
                other => other.into(),
            })?;
            if r.truncated {
                warnings.push(format!(
                    "odd sample count {}: last element of each sample dropped",
                    x.len()
                ));
            }
            if a.literal_matrix {
                warnings.push("cross block built literally as d(A_j, B_j)".to_string());
            }
            json!({
                "ob": est(&r.estimate),
                "matching": {
                    "n": r.matching.permutation.len(),
                    "n_cross": r.matching.n_cross,
                    "raw_statistic": r.matching.raw_statistic,
                    "statistic": r.matching.statistic,
                    "total_distance": r.matching.total_distance,
                    "exact": r.matching.exact,
                },
            })
        }
        method => {
            let p0 = fit(&x, a.bandwidth0)?;
            let p1 = fit(&y, a.bandwidth1)?;
            let mut res = json!({
                "n0": x.len(),
                "n1": y.len(),
                "bandwidth0": bandwidth_of(&p0),
                "bandwidth1": bandwidth_of(&p1),
                "ovl": est(&overlap::ovl_quadrature(&p0, &p1, grids.n_1d)?),
                "oc": est(&overlap::oc_quadrature(&p0, &p1, grids.n_1d)?),
            });
            if method == SampleMethod::Quad {
                res["om"] = est(&overlap::om_quadrature(&p0, &p1, grids.n_2d)?);
                res["ob"] = est(&overlap::ob_quadrature(&p0, &p1, grids.n_2d)?);
            } else {
                let seed = a.seed.expect("checked above");
                res["om"] = est(&overlap::om_monte_carlo(&p0, &p1, a.n_draws, seed)?);
                res["ob"] = est(&overlap::ob_monte_carlo(&p0, &p1, a.n_draws, seed)?);
            }
            res
        }
    };
    Ok(Output::Json(Report::new(
        "samples",
        echo(a),
        results,
        warnings,
    )))
}

pub fn cmd_trial(a: &TrialArgs) -> CmdResult {
    let cfg = TrialConfig::new(a.n, a.sigma, a.alpha, a.q0)?.with_theta0(a.theta0)?;
    let decision = trial::decide(a.xbar, &cfg)?;
    let mut results = json!({ "decision": serde_json::to_value(&decision).expect("serialisable") });
    if let Some(b) = a.bootstrap {
        let seed = a
            .seed
            .ok_or_else(|| CliError::usage("--bootstrap requires --seed"))?;
        let summary = trial::parametric_bootstrap(a.xbar, &cfg, b, seed)?;
        results["bootstrap"] = serde_json::to_value(&summary).expect("serialisable");
    }
    Ok(Output::Json(Report::new(
        "trial",
        echo(a),
        results,
        Vec::new(),
    )))
}

pub fn cmd_sets(a: &SetsArgs) -> CmdResult {
    let read = |p: &PathBuf| -> Result<HashSet<String>, CliError> {
        Ok(input::read_tokens(p)
            .map_err(CliError::data)?
            .into_iter()
            .collect())
    };
    let (sa, sb) = (read(&a.file_a)?, read(&a.file_b)?);
    let counts = SetCounts::from_sets(&sa, &sb).map_err(CliError::data)?;
    let double_sum = sets::om_sets_double_sum(&sa, &sb).map_err(CliError::data)?;
    let results = json!({
        "size_a": counts.size_a,
        "size_b": counts.size_b,
        "shared": counts.shared,
        "overlap_coefficient": counts.overlap_coefficient(),
        "jaccard": counts.jaccard(),
        "om": counts.om(),
        "om_double_sum": double_sum,
        "sandwich_holds": counts.sandwich_holds(),
    });
    Ok(Output::Json(Report::new(
        "sets",
        echo(a),
        results,
        Vec::new(),
    )))
}
