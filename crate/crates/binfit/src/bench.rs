//! Synthetic district generator and evaluation harness: draws binned
//! samples from known distributions, fits the requested estimators, and
//! reports the accuracy metrics (relative bias, RMSRE, undefined shares)
//! plus plot-ready scatter data.

use std::io::Write as _;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use thiserror::Error;

use crate::binned::{Bin, BinnedSample, EligibilityRule};
use crate::compare::{dagum_moment, dagum_pdf, DagumParams};
use crate::fit::{fit_dagum, fit_egg, fit_gb2_seeded, fit_power, midpoint_estimate, FitConfig, FitResult};
use crate::moment::MomentSummary;
use crate::power::PowerFamily;
use crate::select::{aggregate, best_of_breed, EvalReport, UnitEval};
use crate::special::ln_gamma_unchecked;

/// The year-2000 sixteen-bin census income scheme (the default edges).
pub const CENSUS_2000_EDGES: [f64; 17] = [
    0.0, 10_000.0, 15_000.0, 20_000.0, 25_000.0, 30_000.0, 35_000.0, 40_000.0, 45_000.0,
    50_000.0, 60_000.0, 75_000.0, 100_000.0, 125_000.0, 150_000.0, 200_000.0, f64::INFINITY,
];

/// Generating distribution for synthetic incomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenFamily {
    Lognormal { mu: f64, sigma: f64 },
    Gamma { shape: f64, scale: f64 },
    Weibull { shape: f64, scale: f64 },
    Dagum { a: f64, b: f64, p: f64 },
}

impl GenFamily {
    /// Analytic (mean, variance) of the generating distribution.
    pub fn true_moments(&self) -> (f64, f64) {
        match *self {
            GenFamily::Lognormal { mu, sigma } => {
                let s2 = sigma * sigma;
                let mean = (mu + 0.5 * s2).exp();
                (mean, (s2.exp() - 1.0) * (2.0 * mu + s2).exp())
            }
            GenFamily::Gamma { shape, scale } => (shape * scale, shape * scale * scale),
            GenFamily::Weibull { shape, scale } => {
                let g1 = ln_gamma_unchecked(1.0 + 1.0 / shape).exp();
                let g2 = ln_gamma_unchecked(1.0 + 2.0 / shape).exp();
                (scale * g1, scale * scale * (g2 - g1 * g1))
            }
            GenFamily::Dagum { a, b, p } => {
                let d = DagumParams { a, b, p };
                let m1 = dagum_moment(1, &d).finite().expect("validated: finite mean");
                let m2 = dagum_moment(2, &d).finite().expect("validated: finite variance");
                (m1, m2 - m1 * m1)
            }
        }
    }

    /// Density, used by the oracle tests that cross-check `true_moments`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            GenFamily::Lognormal { mu, sigma } => {
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / (x * sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            GenFamily::Gamma { shape, scale } => {
                let log_d = (shape - 1.0) * x.ln() - x / scale
                    - shape * scale.ln()
                    - ln_gamma_unchecked(shape);
                log_d.exp()
            }
            GenFamily::Weibull { shape, scale } => {
                let r = x / scale;
                shape / scale * r.powf(shape - 1.0) * (-r.powf(shape)).exp()
            }
            GenFamily::Dagum { a, b, p } => {
                dagum_pdf(&DagumParams { a, b, p }, x).unwrap_or(0.0)
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            GenFamily::Lognormal { mu, sigma } => {
                rand_distr::LogNormal::new(mu, sigma).expect("validated params").sample(rng)
            }
            GenFamily::Gamma { shape, scale } => {
                rand_distr::Gamma::new(shape, scale).expect("validated params").sample(rng)
            }
            GenFamily::Weibull { shape, scale } => {
                rand_distr::Weibull::new(scale, shape).expect("validated params").sample(rng)
            }
            GenFamily::Dagum { a, b, p } => {
                // Inverse CDF of (1 + (x/b)^{-a})^{-p}.
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                b * (u.powf(-1.0 / p) - 1.0).powf(-1.0 / a)
            }
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        let ok = match *self {
            GenFamily::Lognormal { mu, sigma } => mu.is_finite() && sigma > 0.0,
            GenFamily::Gamma { shape, scale } | GenFamily::Weibull { shape, scale } => {
                shape > 0.0 && scale > 0.0
            }
            // The harness needs finite true moments, so the Dagum generator
            // must have a > 2.
            GenFamily::Dagum { a, b, p } => a > 2.0 && b > 0.0 && p > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(BenchError::InvalidSpec("generating family parameters out of range"))
        }
    }
}

/// Specification of a synthetic benchmark population.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub family: GenFamily,
    pub n_units: u32,
    /// Inclusive range of household counts per unit.
    pub unit_size: (u32, u32),
    pub bin_edges: Vec<f64>,
    pub apply_census_rounding: bool,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: GenFamily, n_units: u32, unit_size: (u32, u32), seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            family,
            n_units,
            unit_size,
            bin_edges: CENSUS_2000_EDGES.to_vec(),
            apply_census_rounding: true,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        self.family.validate()?;
        if self.n_units < 1 {
            return Err(BenchError::InvalidSpec("need at least one unit"));
        }
        if self.unit_size.0 < 1 || self.unit_size.0 > self.unit_size.1 {
            return Err(BenchError::InvalidSpec("unit size range must be 1 <= lo <= hi"));
        }
        let e = &self.bin_edges;
        if e.len() < 2
            || e[0] != 0.0
            || e.windows(2).any(|w| !(w[0] < w[1]))
            || *e.last().expect("non-empty") != f64::INFINITY
        {
            return Err(BenchError::InvalidSpec(
                "bin edges must rise strictly from 0 to +inf",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(&'static str),
    #[error("the estimator set is empty")]
    EmptyEstimatorSet,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One generated unit with the truth it was drawn from.
#[derive(Debug, Clone)]
pub struct GeneratedUnit {
    pub sample: BinnedSample,
    pub true_mean: f64,
    pub true_variance: f64,
}

fn unit_rng(seed: u64, index: u32, stream: u64) -> ChaCha8Rng {
    let mut z = seed
        .wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(stream.wrapping_mul(0xd1b5_4a32_d192_ed03));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Draws the synthetic units. Fully deterministic given the spec: each
/// unit's RNG derives from (seed, unit index), so unit k is the same no
/// matter how many units surround it.
pub fn generate(spec: &GeneratorSpec) -> Result<Vec<GeneratedUnit>, BenchError> {
    spec.validate()?;
    let (true_mean, true_variance) = spec.family.true_moments();
    let mut units = Vec::with_capacity(spec.n_units as usize);
    for index in 0..spec.n_units {
        let mut rng = unit_rng(spec.seed, index, 0);
        let size = rng.gen_range(spec.unit_size.0..=spec.unit_size.1);
        let n_bins = spec.bin_edges.len() - 1;
        let mut counts = vec![0u64; n_bins];
        for _ in 0..size {
            let x = spec.family.draw(&mut rng);
            // First edge greater than x bounds the bin on the right.
            let pos = spec.bin_edges.partition_point(|&e| e <= x);
            counts[pos.saturating_sub(1).min(n_bins - 1)] += 1;
        }
        let bins = spec
            .bin_edges
            .windows(2)
            .zip(&counts)
            .map(|(w, &n)| {
                let n = if spec.apply_census_rounding { crate::binned::census_round(n) } else { n };
                Bin::new(w[0], w[1], n)
            })
            .collect();
        let sample = BinnedSample::new(format!("unit{index:05}"), bins)
            .validate()
            .expect("edges produce structurally valid bins");
        units.push(GeneratedUnit { sample, true_mean, true_variance });
    }
    Ok(units)
}

/// Builds a sample whose counts are the rounded expected counts of `cdf`
/// on the given edges, for recovery tests where the generator is the
/// oracle.
pub fn expected_count_sample(
    id: &str,
    edges: &[f64],
    total: f64,
    cdf: impl Fn(f64) -> f64,
) -> BinnedSample {
    let bins = edges
        .windows(2)
        .map(|w| {
            let hi = if w[1] == f64::INFINITY { 1.0 } else { cdf(w[1]) };
            let lo = if w[0] == 0.0 { 0.0 } else { cdf(w[0]) };
            Bin::new(w[0], w[1], (total * (hi - lo)).round().max(0.0) as u64)
        })
        .collect();
    BinnedSample::new(id, bins)
}

/// The estimators the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Egg,
    Pn,
    Pl,
    BestOfBreed,
    Dagum,
    Gb2,
    Midpoint,
}

impl Estimator {
    pub const ALL: [Estimator; 7] = [
        Estimator::Egg,
        Estimator::Pn,
        Estimator::Pl,
        Estimator::BestOfBreed,
        Estimator::Dagum,
        Estimator::Gb2,
        Estimator::Midpoint,
    ];
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Estimator::Egg => "EGG",
            Estimator::Pn => "PN",
            Estimator::Pl => "PL",
            Estimator::BestOfBreed => "best",
            Estimator::Dagum => "Dagum",
            Estimator::Gb2 => "GB2",
            Estimator::Midpoint => "midpoint",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for Estimator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "egg" => Ok(Estimator::Egg),
            "pn" => Ok(Estimator::Pn),
            "pl" => Ok(Estimator::Pl),
            "best" | "best-of-breed" => Ok(Estimator::BestOfBreed),
            "dagum" => Ok(Estimator::Dagum),
            "gb2" => Ok(Estimator::Gb2),
            "midpoint" => Ok(Estimator::Midpoint),
            other => Err(format!("unknown estimator '{other}'")),
        }
    }
}

/// One scatter-file row: a unit's truth and one estimator's estimate.
#[derive(Debug, Clone)]
pub struct ScatterRow {
    pub estimator: Estimator,
    pub unit: String,
    pub true_mean: f64,
    pub estimate: Option<f64>,
    pub relative_error: Option<f64>,
    pub smoothed_error: Option<f64>,
}

/// Everything a benchmark run produces.
#[derive(Debug)]
pub struct BenchmarkOutcome {
    pub reports: Vec<(Estimator, EvalReport)>,
    pub scatter: Vec<ScatterRow>,
    /// Units dropped by the eligibility rule before any fitting.
    pub skipped_ineligible: usize,
}

/// Per-unit cache of family fits shared among estimators.
#[derive(Default)]
struct UnitFits {
    egg: Option<Result<FitResult, crate::fit::FitError>>,
    pn: Option<Result<FitResult, crate::fit::FitError>>,
    pl: Option<Result<FitResult, crate::fit::FitError>>,
    dagum: Option<Result<FitResult, crate::fit::FitError>>,
}

impl UnitFits {
    fn egg(&mut self, s: &BinnedSample, c: &FitConfig) -> Option<FitResult> {
        self.egg.get_or_insert_with(|| fit_egg(s, c)).clone().ok()
    }
    fn pn(&mut self, s: &BinnedSample, c: &FitConfig) -> Option<FitResult> {
        self.pn
            .get_or_insert_with(|| fit_power(s, PowerFamily::Normal, c))
            .clone()
            .ok()
    }
    fn pl(&mut self, s: &BinnedSample, c: &FitConfig) -> Option<FitResult> {
        self.pl
            .get_or_insert_with(|| fit_power(s, PowerFamily::Logistic, c))
            .clone()
            .ok()
    }
    fn dagum(&mut self, s: &BinnedSample, c: &FitConfig) -> Option<FitResult> {
        self.dagum.get_or_insert_with(|| fit_dagum(s, c)).clone().ok()
    }
}

fn summary_of(fit: Option<FitResult>) -> MomentSummary {
    fit.map(|f| f.moments).unwrap_or_else(MomentSummary::indeterminate)
}

/// Fits every requested estimator to every generated unit and aggregates
/// the accuracy metrics. Ineligible units are skipped before fitting
/// (mirroring the data screens applied upstream of the real pipeline);
/// a unit whose fit fails is tallied as undefined for that estimator and
/// never aborts the batch.
pub fn run_benchmark(
    spec: &GeneratorSpec,
    estimators: &[Estimator],
    config: &FitConfig,
    midpoint_top_bin_factor: f64,
) -> Result<BenchmarkOutcome, BenchError> {
    if estimators.is_empty() {
        return Err(BenchError::EmptyEstimatorSet);
    }
    let units = generate(spec)?;
    let rule = EligibilityRule::default();
    let mut evals: Vec<Vec<UnitEval>> = vec![Vec::new(); estimators.len()];
    let mut skipped = 0usize;

    for (index, unit) in units.iter().enumerate() {
        if !rule.is_eligible(&unit.sample) {
            skipped += 1;
            continue;
        }
        let unit_config = config.with_seed(unit_rng(spec.seed, index as u32, 1).gen());
        let mut fits = UnitFits::default();
        for (slot, estimator) in estimators.iter().enumerate() {
            let summary = match estimator {
                Estimator::Egg => summary_of(fits.egg(&unit.sample, &unit_config)),
                Estimator::Pn => summary_of(fits.pn(&unit.sample, &unit_config)),
                Estimator::Pl => summary_of(fits.pl(&unit.sample, &unit_config)),
                Estimator::BestOfBreed => {
                    let egg = fits.egg(&unit.sample, &unit_config);
                    let pn = fits.pn(&unit.sample, &unit_config);
                    let pl = fits.pl(&unit.sample, &unit_config);
                    best_of_breed(egg, pn, pl)
                        .map(|b| b.chosen.moments)
                        .unwrap_or_else(|_| MomentSummary::indeterminate())
                }
                Estimator::Dagum => summary_of(fits.dagum(&unit.sample, &unit_config)),
                Estimator::Gb2 => {
                    let seed = fits.dagum(&unit.sample, &unit_config);
                    summary_of(
                        fit_gb2_seeded(&unit.sample, &unit_config, seed.as_ref()).ok(),
                    )
                }
                Estimator::Midpoint => {
                    midpoint_estimate(&unit.sample, midpoint_top_bin_factor)
                }
            };
            evals[slot].push(UnitEval {
                id: unit.sample.id.clone(),
                true_mean: unit.true_mean,
                est_mean: summary.mean,
                est_variance: summary.variance,
            });
        }
    }

    let mut reports = Vec::with_capacity(estimators.len());
    let mut scatter = Vec::new();
    for (slot, &estimator) in estimators.iter().enumerate() {
        let report = aggregate(&evals[slot]).map_err(|_| BenchError::InvalidSpec(
            "no eligible units were generated; enlarge unit sizes or counts",
        ))?;
        scatter.extend(scatter_rows(estimator, &report));
        reports.push((estimator, report));
    }
    Ok(BenchmarkOutcome { reports, scatter, skipped_ineligible: skipped })
}

/// Span (to each side) of the moving-average smoother on the scatter rows.
const SMOOTH_HALF_SPAN: usize = 10;

fn scatter_rows(estimator: Estimator, report: &EvalReport) -> Vec<ScatterRow> {
    // Order by true mean (log order equals linear order) and smooth the
    // defined errors with a fixed-span moving average.
    let mut order: Vec<usize> = (0..report.per_unit.len()).collect();
    order.sort_by(|&i, &j| {
        report.per_unit[i]
            .true_mean
            .total_cmp(&report.per_unit[j].true_mean)
            .then_with(|| report.per_unit[i].id.cmp(&report.per_unit[j].id))
    });
    let defined: Vec<(usize, f64)> = order
        .iter()
        .enumerate()
        .filter_map(|(rank, &i)| report.per_unit[i].relative_error.map(|e| (rank, e)))
        .collect();
    let mut smoothed: Vec<Option<f64>> = vec![None; report.per_unit.len()];
    for (k, &(rank, _)) in defined.iter().enumerate() {
        let lo = k.saturating_sub(SMOOTH_HALF_SPAN);
        let hi = (k + SMOOTH_HALF_SPAN).min(defined.len() - 1);
        let window = &defined[lo..=hi];
        let mean = window.iter().map(|&(_, e)| e).sum::<f64>() / window.len() as f64;
        smoothed[order[rank]] = Some(mean);
    }
    order
        .iter()
        .map(|&i| {
            let u = &report.per_unit[i];
            ScatterRow {
                estimator,
                unit: u.id.clone(),
                true_mean: u.true_mean,
                estimate: u.est_mean.finite(),
                relative_error: u.relative_error,
                smoothed_error: smoothed[i],
            }
        })
        .collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.6}"),
        None => "NA".to_string(),
    }
}

/// Writes the per-estimator metrics file (one row per estimator).
pub fn write_metrics(path: impl AsRef<Path>, outcome: &BenchmarkOutcome) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "estimator,n_units,relative_bias,rmsre,undefined_mean_share,undefined_variance_share"
    )?;
    for (estimator, report) in &outcome.reports {
        writeln!(
            out,
            "{},{},{},{},{:.6},{:.6}",
            estimator,
            report.per_unit.len(),
            fmt_opt(report.relative_bias),
            fmt_opt(report.rmsre),
            report.undefined_mean_share,
            report.undefined_variance_share,
        )?;
    }
    out.flush()
}

/// Writes the scatter file (unit, truth, estimate, error, smoothed error).
pub fn write_scatter(path: impl AsRef<Path>, outcome: &BenchmarkOutcome) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "estimator,id,true_mean,estimate,relative_error,smoothed_error")?;
    for row in &outcome.scatter {
        writeln!(
            out,
            "{},{},{:.6},{},{},{}",
            row.estimator,
            row.unit,
            row.true_mean,
            fmt_opt(row.estimate),
            fmt_opt(row.relative_error),
            fmt_opt(row.smoothed_error),
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{moment_by_quadrature, QuadratureSpec};

    fn small_spec() -> GeneratorSpec {
        GeneratorSpec::new(
            GenFamily::Lognormal { mu: 10.8, sigma: 0.7 },
            6,
            (200, 400),
            42,
        )
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate(&small_spec()).unwrap();
        let b = generate(&small_spec()).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.sample, y.sample);
        }
    }

    #[test]
    fn sizes_respect_bounds_and_eligibility() {
        let spec = GeneratorSpec {
            apply_census_rounding: false,
            ..GeneratorSpec::new(GenFamily::Gamma { shape: 2.5, scale: 20_000.0 }, 10, (40, 40), 7)
        };
        let units = generate(&spec).unwrap();
        for u in &units {
            assert_eq!(u.sample.total, 40);
            assert!(EligibilityRule::default().is_eligible(&u.sample));
        }
    }

    #[test]
    fn true_moments_match_quadrature() {
        let spec = QuadratureSpec::default();
        let families = [
            GenFamily::Lognormal { mu: 11.0, sigma: 0.7 },
            GenFamily::Gamma { shape: 2.5, scale: 20_000.0 },
            GenFamily::Weibull { shape: 1.4, scale: 55_000.0 },
            GenFamily::Dagum { a: 3.5, b: 45_000.0, p: 1.1 },
        ];
        for family in families {
            let (mean, variance) = family.true_moments();
            let m1 = moment_by_quadrature(|x| family.pdf(x), 1, &spec)
                .unwrap()
                .finite()
                .unwrap();
            let m2 = moment_by_quadrature(|x| family.pdf(x), 2, &spec)
                .unwrap()
                .finite()
                .unwrap();
            assert!((m1 - mean).abs() / mean < 1e-6, "{family:?} mean {m1} vs {mean}");
            let v = m2 - m1 * m1;
            assert!((v - variance).abs() / variance < 1e-5, "{family:?} var {v} vs {variance}");
        }
    }

    #[test]
    fn lognormal_big_unit_mean_is_close() {
        // One huge unit, no rounding: the binned sample's own mass should
        // put the midpoint estimate in the right ballpark, and the exact
        // draws' mean must approach the analytic truth.
        let spec = GeneratorSpec {
            apply_census_rounding: false,
            ..GeneratorSpec::new(GenFamily::Lognormal { mu: 11.0, sigma: 0.7 }, 1, (1_000_000, 1_000_000), 3)
        };
        let units = generate(&spec).unwrap();
        let (truth, _) = spec.family.true_moments();
        // Direct check on the generator stream itself.
        let mut rng = unit_rng(spec.seed, 0, 0);
        let _size = rng.gen_range(spec.unit_size.0..=spec.unit_size.1);
        let mean: f64 =
            (0..1_000_000).map(|_| spec.family.draw(&mut rng)).sum::<f64>() / 1e6;
        assert!((mean - truth).abs() / truth < 0.005, "{mean} vs {truth}");
        assert_eq!(units[0].sample.total, 1_000_000);
    }

    #[test]
    fn dagum_generator_needs_finite_variance() {
        let spec = GeneratorSpec::new(GenFamily::Dagum { a: 1.8, b: 1.0, p: 1.0 }, 1, (10, 10), 0);
        assert!(matches!(spec.validate(), Err(BenchError::InvalidSpec(_))));
    }

    #[test]
    fn empty_estimator_set_rejected() {
        let err = run_benchmark(&small_spec(), &[], &FitConfig::default(), 1.5).unwrap_err();
        assert!(matches!(err, BenchError::EmptyEstimatorSet));
    }

    #[test]
    fn benchmark_smoke_midpoint_only() {
        let outcome =
            run_benchmark(&small_spec(), &[Estimator::Midpoint], &FitConfig::default(), 1.5)
                .unwrap();
        assert_eq!(outcome.reports.len(), 1);
        let report = &outcome.reports[0].1;
        assert_eq!(report.per_unit.len() + outcome.skipped_ineligible, 6);
        assert!(report.rmsre.is_some());
        assert_eq!(outcome.scatter.len(), report.per_unit.len());
        // Smoothed column is populated for defined rows.
        assert!(outcome.scatter.iter().all(|r| r.smoothed_error.is_some()));
    }

    #[test]
    fn estimator_names_round_trip() {
        for e in Estimator::ALL {
            let back: Estimator = e.to_string().parse().unwrap();
            assert_eq!(back, e);
        }
        assert!("splines".parse::<Estimator>().is_err());
    }
}
