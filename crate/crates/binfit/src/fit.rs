//! Binned log-likelihood evaluation and maximum-likelihood fitting for the
//! EGG, power-normal, power-logistic, Dagum, and GB2 families, plus the
//! midpoint baseline estimator.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::binned::{BinnedSample, EligibilityRule};
use crate::compare::{dagum_cdf, dagum_moment, gb2_cdf, gb2_moment, DagumParams, Gb2Params};
use crate::egg::{egg_cdf, egg_moment, egg_moment_uses_fallback, EggParams};
use crate::moment::{summarize_moments, MomentSummary, MomentValue};
use crate::power::{power_moment, power_transform, standardized, PowerFamily, PowerLambda, PowerParams};
use crate::simplex::{maximize, SimplexOptions, SimplexResult, SimplexStatus};

/// The five fitted families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Egg,
    Pn,
    Pl,
    Dagum,
    Gb2,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Family::Egg => "EGG",
            Family::Pn => "PN",
            Family::Pl => "PL",
            Family::Dagum => "Dagum",
            Family::Gb2 => "GB2",
        };
        write!(f, "{name}")
    }
}

/// Fitted parameter record for any family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    Egg(EggParams),
    Power(PowerParams),
    Dagum(DagumParams),
    Gb2(Gb2Params),
}

/// CDF of any family evaluated at a bin endpoint x >= 0, with the endpoint
/// conventions of the binned likelihood: x = 0 maps through each family's
/// own convention (a log-case transform sends it to probability 0, an
/// integer-root transform to the kernel mass below zero; the positive
/// families are 0 there).
pub fn cdf_at(params: &FamilyParams, x: f64) -> f64 {
    match params {
        FamilyParams::Egg(p) => {
            if x <= 0.0 {
                0.0
            } else {
                egg_cdf(p, x).unwrap_or(f64::NAN)
            }
        }
        FamilyParams::Power(p) => p.family.kernel_cdf(standardized(p, x.max(0.0))),
        FamilyParams::Dagum(p) => {
            if x <= 0.0 {
                0.0
            } else {
                dagum_cdf(p, x).unwrap_or(f64::NAN)
            }
        }
        FamilyParams::Gb2(p) => {
            if x <= 0.0 {
                0.0
            } else {
                gb2_cdf(p, x).unwrap_or(f64::NAN)
            }
        }
    }
}

/// Diagnostics attached to a fit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FitFlags {
    /// The likelihood converged but parameters were still moving beyond
    /// the parameter tolerance.
    pub convergence_warning: bool,
    /// The iteration budget ran out; estimates are still reported.
    pub convergence_failure: bool,
    /// Moments were computed by the near-lognormal linear fallback.
    pub moment_fallback_used: bool,
    /// A zero lower bin endpoint was replaced by 1/2 before fitting.
    pub endpoint_substituted: bool,
}

impl FitFlags {
    pub fn any(&self) -> bool {
        self.convergence_warning
            || self.convergence_failure
            || self.moment_fallback_used
            || self.endpoint_substituted
    }

    fn from_status(status: SimplexStatus) -> FitFlags {
        FitFlags {
            convergence_warning: status == SimplexStatus::StalledAboveXTol,
            convergence_failure: status == SimplexStatus::IterationLimit,
            ..FitFlags::default()
        }
    }
}

impl std::fmt::Display for FitFlags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut names = Vec::new();
        if self.convergence_warning {
            names.push("ConvergenceWarning");
        }
        if self.convergence_failure {
            names.push("ConvergenceFailure");
        }
        if self.moment_fallback_used {
            names.push("MomentFallbackUsed");
        }
        if self.endpoint_substituted {
            names.push("EndpointSubstituted");
        }
        write!(f, "{}", names.join("+"))
    }
}

/// A completed maximum-likelihood fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub family: Family,
    pub params: FamilyParams,
    pub loglik: f64,
    pub moments: MomentSummary,
    pub flags: FitFlags,
}

/// Optimizer settings. Fits are deterministic given (sample, config, seed).
#[derive(Debug, Clone)]
pub struct FitConfig {
    pub max_iterations: u32,
    pub param_tol: f64,
    pub loglik_tol: f64,
    /// Randomized extra starts beyond the deterministic ones.
    pub restarts: u32,
    pub seed: u64,
    /// Replaces the default power-normal exponent grid when set.
    pub pn_grid: Option<Vec<u32>>,
    /// Replaces the default power-logistic exponent grid when set.
    pub pl_grid: Option<Vec<u32>>,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iterations: 2000,
            param_tol: 1e-8,
            loglik_tol: 1e-8,
            restarts: 3,
            seed: 0,
            pn_grid: None,
            pl_grid: None,
        }
    }
}

impl FitConfig {
    pub fn with_seed(&self, seed: u64) -> FitConfig {
        FitConfig { seed, ..self.clone() }
    }

    fn simplex_options(&self) -> SimplexOptions {
        SimplexOptions {
            max_iterations: self.max_iterations,
            value_tol: self.loglik_tol,
            x_tol: self.param_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("sample '{0}' does not meet the eligibility rule")]
    IneligibleSample(String),
    #[error("every exponent grid point failed to fit")]
    AllGridPointsFailed,
    #[error("no feasible parameter point was found")]
    NoFeasibleStart,
}

/// Log-likelihood of a validated sample under a CDF: the count-weighted
/// sum of log bin probabilities. An unbounded upper endpoint contributes
/// probability 1 - F(lower); any nonzero-count bin with nonpositive (or
/// NaN) probability sends the whole sum to -inf, which the optimizer reads
/// as an infeasible parameter point.
pub fn binned_loglik(sample: &BinnedSample, cdf: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    for bin in &sample.bins {
        if bin.count == 0 {
            continue;
        }
        let hi = if bin.upper.is_infinite() { 1.0 } else { cdf(bin.upper) };
        let p = hi - cdf(bin.lower);
        if !(p > 0.0) {
            return f64::NEG_INFINITY;
        }
        total += bin.count as f64 * p.ln();
    }
    total
}

/// Mean and variance of the discrete distribution that puts each bin's
/// count at its midpoint, with the unbounded top bin placed at
/// `top_bin_factor` times its lower bound.
pub fn midpoint_estimate(sample: &BinnedSample, top_bin_factor: f64) -> MomentSummary {
    if sample.total == 0 {
        return MomentSummary::indeterminate();
    }
    let total = sample.total as f64;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for bin in &sample.bins {
        let mid = bin.midpoint(top_bin_factor);
        let w = bin.count as f64 / total;
        m1 += w * mid;
        m2 += w * mid * mid;
    }
    summarize_moments(MomentValue::Finite(m1), MomentValue::Finite(m2))
}

// ---------------------------------------------------------------------------
// Internal optimization machinery
// ---------------------------------------------------------------------------

/// A censored observation group on the working scale; `lo` may be -inf and
/// `hi` may be +inf.
#[derive(Debug, Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
    n: f64,
}

fn intervals_of(sample: &BinnedSample) -> Vec<Interval> {
    sample
        .bins
        .iter()
        .filter(|b| b.count > 0)
        .map(|b| Interval { lo: b.lower, hi: b.upper, n: b.count as f64 })
        .collect()
}

/// Location-scale interval log-likelihood under a standardized kernel CDF.
fn interval_loglik(
    intervals: &[Interval],
    kernel: impl Fn(f64) -> f64,
    mu: f64,
    sigma: f64,
) -> f64 {
    let mut total = 0.0;
    for iv in intervals {
        let hi = if iv.hi == f64::INFINITY { 1.0 } else { kernel((iv.hi - mu) / sigma) };
        let lo = if iv.lo == f64::NEG_INFINITY { 0.0 } else { kernel((iv.lo - mu) / sigma) };
        let p = hi - lo;
        if !(p > 0.0) {
            return f64::NEG_INFINITY;
        }
        total += iv.n * p.ln();
    }
    total
}

/// Runs the simplex from every deterministic start, then from `restarts`
/// randomized perturbations of the best start, and keeps the best finite
/// outcome.
fn multi_start(
    obj: &dyn Fn(&[f64]) -> f64,
    starts: &[Vec<f64>],
    steps: &[f64],
    opts: &SimplexOptions,
    restarts: u32,
    rng: &mut ChaCha8Rng,
) -> Option<SimplexResult> {
    let mut best: Option<SimplexResult> = None;
    for start in starts {
        let run = maximize(obj, start, steps, opts);
        if run.value.is_finite() && best.as_ref().map_or(true, |b| run.value > b.value) {
            best = Some(run);
        }
    }
    let anchor: Vec<f64> = match &best {
        Some(b) => b.x.clone(),
        None => starts.first()?.clone(),
    };
    for _ in 0..restarts {
        let start: Vec<f64> = anchor
            .iter()
            .zip(steps)
            .map(|(&x, &s)| x + rng.gen_range(-3.0..3.0) * s)
            .collect();
        let run = maximize(obj, &start, steps, opts);
        if run.value.is_finite() && best.as_ref().map_or(true, |b| run.value > b.value) {
            best = Some(run);
        }
    }
    best
}

fn rng_for(config: &FitConfig, tag: u64) -> ChaCha8Rng {
    // splitmix64 step keeps per-family streams decorrelated.
    let mut z = config.seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

fn require_eligible(sample: &BinnedSample) -> Result<(), FitError> {
    if EligibilityRule::default().is_eligible(sample) {
        Ok(())
    } else {
        Err(FitError::IneligibleSample(sample.id.clone()))
    }
}

/// Weighted mean and sd of transformed bin midpoints, the deterministic
/// initializer for every fit.
fn transformed_midpoint_moments(sample: &BinnedSample, lambda: PowerLambda) -> (f64, f64) {
    let total = sample.total.max(1) as f64;
    let mut mean = 0.0;
    for bin in &sample.bins {
        let mid = bin.midpoint(1.5).max(f64::MIN_POSITIVE);
        mean += bin.count as f64 / total * power_transform(mid, lambda);
    }
    let mut var = 0.0;
    for bin in &sample.bins {
        let mid = bin.midpoint(1.5).max(f64::MIN_POSITIVE);
        let d = power_transform(mid, lambda) - mean;
        var += bin.count as f64 / total * d * d;
    }
    let sd = var.sqrt().max(1e-6 * (mean.abs() + 1.0));
    (mean, sd)
}

// ---------------------------------------------------------------------------
// EGG
// ---------------------------------------------------------------------------

/// Fits the EGG family by direct search over (mu, ln sigma, lambda).
///
/// A zero lower endpoint is replaced by 1/2 before fitting (flagged as
/// `endpoint_substituted`). Starts combine the lognormal-constrained
/// optimum and midpoint moments with lambda in {-0.5, 0, 0.5, 1}; the
/// reported fit therefore never scores below the constrained lognormal
/// fit. Estimates are returned even when convergence flags are set.
pub fn fit_egg(sample: &BinnedSample, config: &FitConfig) -> Result<FitResult, FitError> {
    require_eligible(sample)?;
    let mut substituted = false;
    let intervals: Vec<Interval> = intervals_of(sample)
        .into_iter()
        .map(|iv| {
            if iv.lo == 0.0 {
                substituted = true;
                Interval { lo: 0.5, ..iv }
            } else {
                iv
            }
        })
        .collect();
    // Log-scale intervals for the lognormal-constrained seed.
    let ln_intervals: Vec<Interval> = intervals
        .iter()
        .map(|iv| Interval { lo: iv.lo.ln(), hi: iv.hi.ln(), n: iv.n })
        .collect();

    let (mid_mu, mid_sd) = transformed_midpoint_moments(sample, PowerLambda::Log);
    let opts = config.simplex_options();
    let mut rng = rng_for(config, 1);

    let ln_obj = |theta: &[f64]| -> f64 {
        let (mu, ln_sigma) = (theta[0], theta[1]);
        if !(-700.0..=700.0).contains(&mu) || !(-30.0..=30.0).contains(&ln_sigma) {
            return f64::NEG_INFINITY;
        }
        interval_loglik(&ln_intervals, crate::special::std_normal_cdf, mu, ln_sigma.exp())
    };
    let seed2d = multi_start(
        &ln_obj,
        &[vec![mid_mu, mid_sd.ln()]],
        &[0.25 * mid_sd.max(0.05), 0.25],
        &opts,
        config.restarts,
        &mut rng,
    );
    let (base_mu, base_ln_sigma) = match &seed2d {
        Some(r) => (r.x[0], r.x[1]),
        None => (mid_mu, mid_sd.ln()),
    };

    let obj = |theta: &[f64]| -> f64 {
        let (mu, ln_sigma, lambda) = (theta[0], theta[1], theta[2]);
        if !(-700.0..=700.0).contains(&mu)
            || !(-30.0..=30.0).contains(&ln_sigma)
            || !(-5.0..=5.0).contains(&lambda)
        {
            return f64::NEG_INFINITY;
        }
        let params = EggParams { mu, sigma: ln_sigma.exp(), lambda };
        let mut total = 0.0;
        for iv in &intervals {
            let hi = if iv.hi == f64::INFINITY {
                1.0
            } else {
                egg_cdf(&params, iv.hi).unwrap_or(f64::NAN)
            };
            let lo = egg_cdf(&params, iv.lo).unwrap_or(f64::NAN);
            let p = hi - lo;
            if !(p > 0.0) {
                return f64::NEG_INFINITY;
            }
            total += iv.n * p.ln();
        }
        total
    };

    let starts: Vec<Vec<f64>> = [-0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|&l| vec![base_mu, base_ln_sigma, l])
        .collect();
    let steps = [0.25 * mid_sd.max(0.05), 0.25, 0.3];
    let best = multi_start(&obj, &starts, &steps, &opts, config.restarts, &mut rng)
        .ok_or(FitError::NoFeasibleStart)?;

    let params = EggParams { mu: best.x[0], sigma: best.x[1].exp(), lambda: best.x[2] };
    let m1 = egg_moment(1, &params);
    let m2 = egg_moment(2, &params);
    let mut flags = FitFlags::from_status(best.status);
    flags.endpoint_substituted = substituted;
    flags.moment_fallback_used = egg_moment_uses_fallback(&params);
    Ok(FitResult {
        family: Family::Egg,
        params: FamilyParams::Egg(params),
        loglik: best.value,
        moments: summarize_moments(m1, m2),
        flags,
    })
}

// ---------------------------------------------------------------------------
// Power-normal / power-logistic
// ---------------------------------------------------------------------------

/// Fits a power family by profiling over the exponent grid: each grid
/// lambda transforms the bin endpoints and gets a two-parameter
/// location-scale fit; the grid point with the highest likelihood wins.
/// For the power-logistic, the log case is excluded whenever its fitted
/// second moment is not finite.
pub fn fit_power(
    sample: &BinnedSample,
    family: PowerFamily,
    config: &FitConfig,
) -> Result<FitResult, FitError> {
    require_eligible(sample)?;
    let base_intervals = intervals_of(sample);
    let opts = config.simplex_options();
    let override_grid = match family {
        PowerFamily::Normal => config.pn_grid.as_deref(),
        PowerFamily::Logistic => config.pl_grid.as_deref(),
    };
    let grid: Vec<PowerLambda> = std::iter::once(PowerLambda::Log)
        .chain(
            override_grid
                .unwrap_or_else(|| family.lambda_grid())
                .iter()
                .map(|&r| PowerLambda::Root(r)),
        )
        .collect();
    let mut rng = rng_for(config, match family {
        PowerFamily::Normal => 2,
        PowerFamily::Logistic => 3,
    });

    let mut best: Option<(PowerParams, SimplexResult)> = None;
    let mut any_grid_fit = false;
    for lambda in grid {
        if matches!(lambda, PowerLambda::Root(r) if r == 0 || r > crate::power::MAX_ROOT) {
            continue;
        }
        let intervals: Vec<Interval> = base_intervals
            .iter()
            .map(|iv| Interval {
                lo: power_transform(iv.lo, lambda),
                hi: if iv.hi == f64::INFINITY {
                    f64::INFINITY
                } else {
                    power_transform(iv.hi, lambda)
                },
                n: iv.n,
            })
            .collect();
        let (mu0, sd0) = transformed_midpoint_moments(sample, lambda);
        let kernel = |z: f64| family.kernel_cdf(z);
        let obj = |theta: &[f64]| -> f64 {
            let (mu, ln_sigma) = (theta[0], theta[1]);
            if !mu.is_finite() || mu.abs() > 1e12 || !(-40.0..=40.0).contains(&ln_sigma) {
                return f64::NEG_INFINITY;
            }
            interval_loglik(&intervals, kernel, mu, ln_sigma.exp())
        };
        let run = multi_start(
            &obj,
            &[vec![mu0, sd0.ln()]],
            &[0.25 * sd0, 0.25],
            &opts,
            config.restarts,
            &mut rng,
        );
        let Some(run) = run else { continue };
        any_grid_fit = true;
        let params = PowerParams { mu: run.x[0], sigma: run.x[1].exp(), lambda, family };
        // The log-logistic is kept only with a finite variance.
        if family == PowerFamily::Logistic
            && lambda == PowerLambda::Log
            && !power_moment(2, &params).is_finite()
        {
            continue;
        }
        if best.as_ref().map_or(true, |(_, b)| run.value > b.value) {
            best = Some((params, run));
        }
    }

    let (params, run) = best.ok_or(if any_grid_fit {
        FitError::NoFeasibleStart
    } else {
        FitError::AllGridPointsFailed
    })?;
    let m1 = power_moment(1, &params);
    let m2 = power_moment(2, &params);
    Ok(FitResult {
        family: match family {
            PowerFamily::Normal => Family::Pn,
            PowerFamily::Logistic => Family::Pl,
        },
        params: FamilyParams::Power(params),
        loglik: run.value,
        moments: summarize_moments(m1, m2),
        flags: FitFlags::from_status(run.status),
    })
}

// ---------------------------------------------------------------------------
// Dagum / GB2
// ---------------------------------------------------------------------------

/// Fits the Dagum family over (ln a, ln b, ln p).
pub fn fit_dagum(sample: &BinnedSample, config: &FitConfig) -> Result<FitResult, FitError> {
    require_eligible(sample)?;
    let intervals = intervals_of(sample);
    let opts = config.simplex_options();
    let mut rng = rng_for(config, 4);
    let scale = midpoint_estimate(sample, 1.5)
        .mean
        .finite()
        .filter(|m| *m > 0.0)
        .unwrap_or(1.0);

    let obj = |theta: &[f64]| dagum_objective(&intervals, theta);
    let starts: Vec<Vec<f64>> = [(1.5, 1.0), (2.5, 1.0), (4.0, 0.7), (6.0, 1.5)]
        .iter()
        .map(|&(a, p)| vec![f64::ln(a), scale.ln(), f64::ln(p)])
        .collect();
    let steps = [0.3, 0.3, 0.3];
    let best = multi_start(&obj, &starts, &steps, &opts, config.restarts, &mut rng)
        .ok_or(FitError::NoFeasibleStart)?;

    let params = DagumParams { a: best.x[0].exp(), b: best.x[1].exp(), p: best.x[2].exp() };
    let m1 = dagum_moment(1, &params);
    let m2 = dagum_moment(2, &params);
    Ok(FitResult {
        family: Family::Dagum,
        params: FamilyParams::Dagum(params),
        loglik: best.value,
        moments: summarize_moments(m1, m2),
        flags: FitFlags::from_status(best.status),
    })
}

fn dagum_objective(intervals: &[Interval], theta: &[f64]) -> f64 {
    if theta.iter().any(|t| !(-16.0..=40.0).contains(t)) {
        return f64::NEG_INFINITY;
    }
    let params = DagumParams { a: theta[0].exp(), b: theta[1].exp(), p: theta[2].exp() };
    if !(0.02..=500.0).contains(&params.a) || !(0.02..=500.0).contains(&params.p) {
        return f64::NEG_INFINITY;
    }
    positive_family_loglik(intervals, |x| dagum_cdf(&params, x).unwrap_or(f64::NAN))
}

/// Fits the GB2 family over (a, ln b, ln p, ln q), with a sign-free.
///
/// The internal Dagum optimum (q = 1) is always among the starts, so the
/// reported likelihood never falls below the Dagum fit's.
pub fn fit_gb2(sample: &BinnedSample, config: &FitConfig) -> Result<FitResult, FitError> {
    require_eligible(sample)?;
    let dagum_seed = fit_dagum(sample, config).ok();
    fit_gb2_seeded(sample, config, dagum_seed.as_ref())
}

/// [`fit_gb2`] with an explicit Dagum fit to seed from (used when the
/// caller has already fitted Dagum on the same sample).
pub fn fit_gb2_seeded(
    sample: &BinnedSample,
    config: &FitConfig,
    dagum_seed: Option<&FitResult>,
) -> Result<FitResult, FitError> {
    require_eligible(sample)?;
    let intervals = intervals_of(sample);
    let opts = config.simplex_options();
    let mut rng = rng_for(config, 5);
    let scale = midpoint_estimate(sample, 1.5)
        .mean
        .finite()
        .filter(|m| *m > 0.0)
        .unwrap_or(1.0);

    let obj = |theta: &[f64]| gb2_objective(&intervals, theta);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(seed) = dagum_seed {
        if let FamilyParams::Dagum(d) = seed.params {
            starts.push(vec![d.a, d.b.ln(), d.p.ln(), 0.0]);
        }
    }
    starts.push(vec![2.0, scale.ln(), 0.0, 0.0]);
    starts.push(vec![1.0, scale.ln(), f64::ln(1.5), f64::ln(2.0)]);
    starts.push(vec![-2.0, scale.ln(), 0.0, 0.0]);
    let steps = [0.3, 0.3, 0.3, 0.3];
    let best = multi_start(&obj, &starts, &steps, &opts, config.restarts, &mut rng)
        .ok_or(FitError::NoFeasibleStart)?;

    let params = Gb2Params {
        a: best.x[0],
        b: best.x[1].exp(),
        p: best.x[2].exp(),
        q: best.x[3].exp(),
    };
    let m1 = gb2_moment(1, &params);
    let m2 = gb2_moment(2, &params);
    Ok(FitResult {
        family: Family::Gb2,
        params: FamilyParams::Gb2(params),
        loglik: best.value,
        moments: summarize_moments(m1, m2),
        flags: FitFlags::from_status(best.status),
    })
}

fn gb2_objective(intervals: &[Interval], theta: &[f64]) -> f64 {
    let a = theta[0];
    if !a.is_finite() || a.abs() < 0.02 || a.abs() > 500.0 {
        return f64::NEG_INFINITY;
    }
    if theta[1..].iter().any(|t| !(-16.0..=40.0).contains(t)) {
        return f64::NEG_INFINITY;
    }
    let params = Gb2Params { a, b: theta[1].exp(), p: theta[2].exp(), q: theta[3].exp() };
    if !(0.02..=500.0).contains(&params.p) || !(0.02..=500.0).contains(&params.q) {
        return f64::NEG_INFINITY;
    }
    positive_family_loglik(intervals, |x| gb2_cdf(&params, x).unwrap_or(f64::NAN))
}

fn positive_family_loglik(intervals: &[Interval], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    for iv in intervals {
        let hi = if iv.hi == f64::INFINITY { 1.0 } else { cdf(iv.hi) };
        let lo = if iv.lo <= 0.0 { 0.0 } else { cdf(iv.lo) };
        let p = hi - lo;
        if !(p > 0.0) {
            return f64::NEG_INFINITY;
        }
        total += iv.n * p.ln();
    }
    total
}
