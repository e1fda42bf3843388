//! Estimates the mean, variance, sd, and coefficient of variation of
//! binned (interval-censored) data by maximum-likelihood fitting of the
//! extended generalized gamma, power-normal, and power-logistic families,
//! with a finite-variance best-of-breed selector and Dagum/GB2 comparison
//! fits, plus a synthetic benchmark harness for accuracy evaluation.

pub mod bench;
pub mod binned;
pub mod compare;
pub mod egg;
pub mod fit;
pub mod moment;
pub mod power;
pub mod select;
pub mod special;

mod simplex;

pub use binned::{census_round, read_samples, write_samples, Bin, BinnedSample, ColumnMap, EligibilityRule};
pub use fit::{
    binned_loglik, fit_dagum, fit_egg, fit_gb2, fit_power, midpoint_estimate, Family,
    FamilyParams, FitConfig, FitError, FitFlags, FitResult,
};
pub use moment::{summarize_moments, MomentSummary, MomentValue};
pub use select::{aggregate, best_of_breed, relative_error, BestOfBreed, EvalReport};

/// Sixteen-bin fixtures shaped like the bundled two-district example file,
/// shared across the crate's tests.
#[cfg(test)]
pub(crate) mod fixtures {
    use crate::bench::CENSUS_2000_EDGES;
    use crate::binned::{Bin, BinnedSample};

    fn from_counts(id: &str, counts: [u64; 16]) -> BinnedSample {
        let bins = CENSUS_2000_EDGES
            .windows(2)
            .zip(counts.iter())
            .map(|(w, &n)| Bin::new(w[0], w[1], n))
            .collect();
        BinnedSample::new(id, bins)
    }

    pub fn mcnary() -> BinnedSample {
        from_counts("McNary", [55, 15, 10, 0, 10, 4, 4, 0, 4, 4, 0, 4, 0, 0, 0, 0])
    }

    pub fn rancho_santa_fe() -> BinnedSample {
        from_counts(
            "Rancho Santa Fe",
            [45, 40, 50, 25, 25, 55, 20, 30, 20, 55, 85, 135, 175, 100, 155, 910],
        )
    }
}
