//! C ABI over `overlap-core`.
//!
//! Every entry point returns an [`OlapStatus`] and writes its result through
//! an out-pointer. On failure the out-pointer is left untouched and a
//! description of the error can be fetched with [`olap_last_error_message`]
//! from the same thread. Densities are opaque handles created by
//! `olap_density_*` constructors and released with [`olap_density_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use overlap_core::bounds;
use overlap_core::crossmatch::{self, CrossmatchOptions};
use overlap_core::density::{self, DensityModel};
use overlap_core::overlap::{self, Measure, Method, OverlapEstimate};
use overlap_core::sets::SetCounts;
use overlap_core::trial::{self, TrialConfig};
use overlap_core::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OlapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Fit = 4,
    DegenerateSupport = 5,
    InsufficientData = 6,
    NumericalIntegrity = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OlapMeasure {
    Om = 0,
    Ovl = 1,
    Ob = 2,
    Oc = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OlapMethod {
    ClosedForm = 0,
    Quadrature = 1,
    MonteCarlo = 2,
    Matching = 3,
    YoudenDecomposition = 4,
}

/// Opaque density model.
pub struct OlapDensity(DensityModel);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlapEstimate {
    pub measure: OlapMeasure,
    pub method: OlapMethod,
    pub value: f64,
    /// Zero except for Monte Carlo estimates.
    pub std_error: f64,
    /// Lattice points per axis, draws, or sample count, depending on `method`.
    pub size: usize,
    pub has_seed: bool,
    pub seed: u64,
    pub degenerate_support: bool,
    pub skipped: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlapTrialConfig {
    pub n: usize,
    pub sigma: f64,
    pub alpha: f64,
    pub q0: f64,
    pub theta0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlapTrialDecision {
    pub xbar: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject_h0: bool,
    pub q_at_estimate: f64,
    pub theta_threshold_for_q0: f64,
    pub q_rule_accepts_new: bool,
    pub threshold_test_p_value: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlapBootstrapSummary {
    pub b: usize,
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
    pub fraction_below_q0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlapCrossmatch {
    pub statistic: f64,
    pub raw_statistic: f64,
    pub n_cross: usize,
    /// Number of matched points after dropping a trailing odd sample.
    pub n: usize,
    pub total_distance: f64,
    pub exact: bool,
    pub truncated: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlapSetOverlap {
    pub overlap_coefficient: f64,
    pub jaccard: f64,
    pub om: f64,
    pub sandwich_holds: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OlapStatus {
    match e {
        Error::InvalidParameter(_) => OlapStatus::InvalidParameter,
        Error::Domain(_) => OlapStatus::Domain,
        Error::Fit(_) => OlapStatus::Fit,
        Error::DegenerateSupport(_) => OlapStatus::DegenerateSupport,
        Error::InsufficientData { .. } => OlapStatus::InsufficientData,
        Error::NumericalIntegrity(_) => OlapStatus::NumericalIntegrity,
        Error::Parse { .. } | Error::Io { .. } => OlapStatus::Io,
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Call<T> = Result<T, Failure>;

/// Runs `f`, writes its value to `out` on success and records the error
/// message otherwise.
fn guard<T>(out: *mut T, f: impl FnOnce() -> Call<T>) -> OlapStatus {
    if out.is_null() {
        set_last_error("output pointer is null".into());
        return OlapStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => {
            // SAFETY: `out` is non-null and the caller guarantees it is valid for writes.
            unsafe { out.write(value) };
            OlapStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            let status = status_of(&e);
            set_last_error(e.to_string());
            status
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} is null"));
            OlapStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic".into());
            OlapStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or a live handle from an `olap_density_*` constructor.
unsafe fn density<'a>(p: *const OlapDensity, what: &'static str) -> Call<&'a DensityModel> {
    p.as_ref().map(|d| &d.0).ok_or(Failure::Null(what))
}

/// # Safety
/// `p` must be null or point to `len` readable `f64`s.
unsafe fn values<'a>(p: *const f64, len: usize, what: &'static str) -> Call<&'a [f64]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must be null or point to a readable `OlapTrialConfig`.
unsafe fn config(p: *const OlapTrialConfig) -> Call<TrialConfig> {
    let c = p.as_ref().ok_or(Failure::Null("config"))?;
    Ok(TrialConfig::new(c.n, c.sigma, c.alpha, c.q0)?.with_theta0(c.theta0)?)
}

fn estimate(e: OverlapEstimate) -> OlapEstimate {
    OlapEstimate {
        measure: match e.measure {
            Measure::Om => OlapMeasure::Om,
            Measure::Ovl => OlapMeasure::Ovl,
            Measure::Ob => OlapMeasure::Ob,
            Measure::Oc => OlapMeasure::Oc,
        },
        method: match e.method {
            Method::ClosedForm => OlapMethod::ClosedForm,
            Method::Quadrature => OlapMethod::Quadrature,
            Method::MonteCarlo => OlapMethod::MonteCarlo,
            Method::Matching => OlapMethod::Matching,
            Method::YoudenDecomposition => OlapMethod::YoudenDecomposition,
        },
        value: e.value,
        std_error: e.std_error,
        size: e.size,
        has_seed: e.seed.is_some(),
        seed: e.seed.unwrap_or(0),
        degenerate_support: e.degenerate_support,
        skipped: e.skipped,
    }
}

fn boxed(model: DensityModel) -> *mut OlapDensity {
    Box::into_raw(Box::new(OlapDensity(model)))
}

/// Message for the most recent failed call on this thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn olap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn olap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Normal density `N(mean, sd²)`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn olap_density_normal(
    mean: f64,
    sd: f64,
    out: *mut *mut OlapDensity,
) -> OlapStatus {
    guard(out, || Ok(boxed(density::normal_density(mean, sd)?)))
}

/// Gaussian kernel density estimate. A non-positive or NaN `bandwidth`
/// selects Silverman's rule.
///
/// # Safety
/// `samples` must point to `len` readable values; `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn olap_density_kde(
    samples: *const f64,
    len: usize,
    bandwidth: f64,
    out: *mut *mut OlapDensity,
) -> OlapStatus {
    guard(out, || {
        let xs = values(samples, len, "samples")?;
        let h = (bandwidth > 0.0).then_some(bandwidth);
        Ok(boxed(density::kde_fit(xs, h)?))
    })
}

/// Releases a density handle. Null is accepted and ignored.
///
/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn olap_density_free(d: *mut OlapDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_density_pdf(
    d: *const OlapDensity,
    x: f64,
    out: *mut f64,
) -> OlapStatus {
    guard(out, || Ok(density(d, "density")?.pdf(x)))
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_density_cdf(
    d: *const OlapDensity,
    x: f64,
    out: *mut f64,
) -> OlapStatus {
    guard(out, || Ok(density(d, "density")?.cdf(x)))
}

/// Integration window of a density.
///
/// # Safety
/// `d` must be a live handle; `lo` and `hi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_density_support(
    d: *const OlapDensity,
    lo: *mut f64,
    hi: *mut f64,
) -> OlapStatus {
    if hi.is_null() {
        set_last_error("hi is null".into());
        return OlapStatus::NullPointer;
    }
    guard(lo, || {
        let (a, b) = density(d, "density")?.support();
        hi.write(b);
        Ok(a)
    })
}

/// Fills `buf[0..n]` with draws from `d`.
///
/// # Safety
/// `d` must be a live handle; `buf` must be writable for `n` values.
#[no_mangle]
pub unsafe extern "C" fn olap_density_draw(
    d: *const OlapDensity,
    n: usize,
    seed: u64,
    buf: *mut f64,
) -> OlapStatus {
    if buf.is_null() {
        set_last_error("buf is null".into());
        return OlapStatus::NullPointer;
    }
    let mut count = 0usize;
    guard(&mut count, || {
        let xs = density(d, "density")?.draw(n, seed)?;
        ptr::copy_nonoverlapping(xs.as_ptr(), buf, xs.len());
        Ok(xs.len())
    })
}

/// Standard normal quantile.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_normal_quantile(p: f64, out: *mut f64) -> OlapStatus {
    guard(out, || Ok(density::normal_quantile(p)?))
}

/// Closed-form `O_M` between `N(0, sigma²)` and `N(theta, sigma²)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_q_normal(
    theta: f64,
    sigma: f64,
    out: *mut OlapEstimate,
) -> OlapStatus {
    guard(out, || {
        Ok(estimate(overlap::q_normal_closed_form(theta, sigma)?))
    })
}

type LatticeFn = fn(&DensityModel, &DensityModel, usize) -> overlap_core::Result<OverlapEstimate>;
type DrawsFn =
    fn(&DensityModel, &DensityModel, usize, u64) -> overlap_core::Result<OverlapEstimate>;

/// # Safety
/// As for the public wrappers below.
unsafe fn lattice(
    f: LatticeFn,
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut OlapEstimate,
) -> OlapStatus {
    guard(out, || {
        Ok(estimate(f(density(p0, "p0")?, density(p1, "p1")?, n_grid)?))
    })
}

/// # Safety
/// As for the public wrappers below.
unsafe fn sampled(
    f: DrawsFn,
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_draws: usize,
    seed: u64,
    out: *mut OlapEstimate,
) -> OlapStatus {
    guard(out, || {
        Ok(estimate(f(
            density(p0, "p0")?,
            density(p1, "p1")?,
            n_draws,
            seed,
        )?))
    })
}

/// `O_M` by quadrature on an `n_grid × n_grid` lattice.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_om_quadrature(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut OlapEstimate,
) -> OlapStatus {
    lattice(overlap::om_quadrature, p0, p1, n_grid, out)
}

/// `O_B` by quadrature on an `n_grid × n_grid` lattice.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_ob_quadrature(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut OlapEstimate,
) -> OlapStatus {
    lattice(overlap::ob_quadrature, p0, p1, n_grid, out)
}

/// `OVL` by quadrature on `n_grid` points.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_ovl_quadrature(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut OlapEstimate,
) -> OlapStatus {
    lattice(overlap::ovl_quadrature, p0, p1, n_grid, out)
}

/// `O_C` by quadrature on `n_grid` points.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_oc_quadrature(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut OlapEstimate,
) -> OlapStatus {
    lattice(overlap::oc_quadrature, p0, p1, n_grid, out)
}

/// `O_M` through the likelihood-ratio set decomposition.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_om_youden(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut OlapEstimate,
) -> OlapStatus {
    lattice(bounds::om_youden_decomposition, p0, p1, n_grid, out)
}

/// Monte Carlo `O_M` with standard error.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_om_monte_carlo(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_draws: usize,
    seed: u64,
    out: *mut OlapEstimate,
) -> OlapStatus {
    sampled(overlap::om_monte_carlo, p0, p1, n_draws, seed, out)
}

/// Monte Carlo `O_B` with standard error.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_ob_monte_carlo(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_draws: usize,
    seed: u64,
    out: *mut OlapEstimate,
) -> OlapStatus {
    sampled(overlap::ob_monte_carlo, p0, p1, n_draws, seed, out)
}

/// Hellinger distance `(∫(√p0 − √p1)²)^{1/2}`.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_hellinger(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut f64,
) -> OlapStatus {
    guard(out, || {
        Ok(bounds::hellinger(
            density(p0, "p0")?,
            density(p1, "p1")?,
            n_grid,
        )?)
    })
}

/// Bhattacharyya coefficient `∫√(p0 p1)`.
///
/// # Safety
/// `p0` and `p1` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_bhattacharyya(
    p0: *const OlapDensity,
    p1: *const OlapDensity,
    n_grid: usize,
    out: *mut f64,
) -> OlapStatus {
    guard(out, || {
        Ok(bounds::bhattacharyya(
            density(p0, "p0")?,
            density(p1, "p1")?,
            n_grid,
        )?)
    })
}

/// # Safety
/// `cfg` must be readable; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_critical_value(
    cfg: *const OlapTrialConfig,
    out: *mut f64,
) -> OlapStatus {
    guard(out, || Ok(trial::critical_value(&config(cfg)?)?))
}

/// # Safety
/// `cfg` must be readable; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_p_value(
    xbar: f64,
    cfg: *const OlapTrialConfig,
    out: *mut f64,
) -> OlapStatus {
    guard(out, || Ok(trial::p_value(xbar, &config(cfg)?)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_theta_threshold(q0: f64, sigma: f64, out: *mut f64) -> OlapStatus {
    guard(out, || Ok(trial::theta_threshold(q0, sigma)?))
}

/// # Safety
/// `cfg` must be readable; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_decide(
    xbar: f64,
    cfg: *const OlapTrialConfig,
    out: *mut OlapTrialDecision,
) -> OlapStatus {
    guard(out, || {
        let d = trial::decide(xbar, &config(cfg)?)?;
        Ok(OlapTrialDecision {
            xbar: d.xbar,
            critical_value: d.critical_value,
            p_value: d.p_value,
            reject_h0: d.reject_h0,
            q_at_estimate: d.q_at_estimate,
            theta_threshold_for_q0: d.theta_threshold_for_q0,
            q_rule_accepts_new: d.q_rule_accepts_new,
            threshold_test_p_value: d.threshold_test_p_value,
        })
    })
}

/// Parametric bootstrap of `O_M`. When `q_tilde` is non-null it receives
/// all `b` replicated values in replication order.
///
/// # Safety
/// `cfg` must be readable; `q_tilde` must be null or writable for `b`
/// values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_parametric_bootstrap(
    theta_hat: f64,
    cfg: *const OlapTrialConfig,
    b: usize,
    seed: u64,
    q_tilde: *mut f64,
    out: *mut OlapBootstrapSummary,
) -> OlapStatus {
    guard(out, || {
        let s = trial::parametric_bootstrap(theta_hat, &config(cfg)?, b, seed)?;
        if !q_tilde.is_null() {
            ptr::copy_nonoverlapping(s.q_tilde.as_ptr(), q_tilde, s.q_tilde.len());
        }
        Ok(OlapBootstrapSummary {
            b: s.b,
            p05: s.quantiles.p05,
            p50: s.quantiles.p50,
            p95: s.quantiles.p95,
            fraction_below_q0: s.fraction_below_q0,
        })
    })
}

/// Crossmatch estimate of `O_B` from paired samples `x ~ p0`, `y ~ p1` of
/// equal length. `literal_matrix` selects the literal cross block.
///
/// # Safety
/// `x` and `y` must each point to `len` readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn olap_crossmatch(
    x: *const f64,
    y: *const f64,
    len: usize,
    literal_matrix: bool,
    out: *mut OlapCrossmatch,
) -> OlapStatus {
    guard(out, || {
        let opts = CrossmatchOptions {
            literal_matrix,
            ..CrossmatchOptions::default()
        };
        let est =
            crossmatch::crossmatch_ob_estimate(values(x, len, "x")?, values(y, len, "y")?, &opts)?;
        Ok(OlapCrossmatch {
            statistic: est.matching.statistic,
            raw_statistic: est.matching.raw_statistic,
            n_cross: est.matching.n_cross,
            n: est.estimate.size,
            total_distance: est.matching.total_distance,
            exact: est.matching.exact,
            truncated: est.truncated,
        })
    })
}

/// Set overlap measures from `|A|`, `|B|` and `|A ∩ B|`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn olap_set_overlap(
    size_a: usize,
    size_b: usize,
    shared: usize,
    out: *mut OlapSetOverlap,
) -> OlapStatus {
    guard(out, || {
        let c = SetCounts::new(size_a, size_b, shared)?;
        Ok(OlapSetOverlap {
            overlap_coefficient: c.overlap_coefficient(),
            jaccard: c.jaccard(),
            om: c.om(),
            sandwich_holds: c.sandwich_holds(),
        })
    })
}
