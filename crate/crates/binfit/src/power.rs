//! Power-normal and power-logistic families: a nonnegative variable whose
//! integer-root transform (or log) is modeled as normal or logistic.

use crate::moment::MomentValue;
use crate::special::{
    logistic_raw_moment, normal_raw_moment, std_logistic_cdf, std_normal_cdf, SpecialError,
};

/// Distribution of the transformed variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerFamily {
    Normal,
    Logistic,
}

impl PowerFamily {
    /// Kernel CDF on the standardized transformed scale.
    pub fn kernel_cdf(&self, z: f64) -> f64 {
        match self {
            PowerFamily::Normal => std_normal_cdf(z),
            PowerFamily::Logistic => std_logistic_cdf(z),
        }
    }

    fn kernel_pdf(&self, z: f64) -> f64 {
        match self {
            PowerFamily::Normal => {
                (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
            }
            PowerFamily::Logistic => {
                let e = (-z.abs()).exp();
                e / ((1.0 + e) * (1.0 + e))
            }
        }
    }

    /// The exponent grid profiled over when fitting this family. The
    /// power-normal grid carries one extra root (33) that the
    /// power-logistic grid does not.
    pub fn lambda_grid(&self) -> &'static [u32] {
        const PN: [u32; 23] = [
            1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 25, 33, 50,
        ];
        const PL: [u32; 22] = [
            1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 25, 50,
        ];
        match self {
            PowerFamily::Normal => &PN,
            PowerFamily::Logistic => &PL,
        }
    }
}

/// The transform exponent: `Log` is the lambda = 0 case; `Root(r)` means
/// t(x) = x^{1/r} for a positive integer r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerLambda {
    Log,
    Root(u32),
}

/// Largest supported root, bounded by the raw-moment order 2 * 50.
pub const MAX_ROOT: u32 = 50;

impl PowerLambda {
    /// Numeric lambda: 0 for `Log`, 1/r for `Root(r)`.
    pub fn lambda(&self) -> f64 {
        match self {
            PowerLambda::Log => 0.0,
            PowerLambda::Root(r) => 1.0 / *r as f64,
        }
    }
}

impl std::fmt::Display for PowerLambda {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PowerLambda::Log => write!(f, "log"),
            PowerLambda::Root(r) => write!(f, "1/{r}"),
        }
    }
}

/// Parameters of a power-transform family: location and scale of the
/// transformed variable plus the transform exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParams {
    pub mu: f64,
    pub sigma: f64,
    pub lambda: PowerLambda,
    pub family: PowerFamily,
}

impl PowerParams {
    pub fn new(
        family: PowerFamily,
        mu: f64,
        sigma: f64,
        lambda: PowerLambda,
    ) -> Result<PowerParams, SpecialError> {
        if !(sigma > 0.0) || !mu.is_finite() {
            return Err(SpecialError::Domain("power family requires finite mu and sigma > 0"));
        }
        if let PowerLambda::Root(r) = lambda {
            if r == 0 || r > MAX_ROOT {
                return Err(SpecialError::Domain("root exponent must be in 1..=50"));
            }
        }
        Ok(PowerParams { mu, sigma, lambda, family })
    }
}

/// The endpoint transform t(x, lambda) for x in [0, ∞], as an extended
/// real: the log case sends 0 to -∞, and +∞ maps to +∞ for every lambda.
pub fn power_transform(x: f64, lambda: PowerLambda) -> f64 {
    debug_assert!(x >= 0.0);
    match lambda {
        PowerLambda::Log => x.ln(), // ln(0) = -inf as required
        PowerLambda::Root(1) => x,
        PowerLambda::Root(r) => x.powf(1.0 / r as f64),
    }
}

/// Standardized transformed value (t(x) - mu) / sigma, extended like
/// [`power_transform`].
pub(crate) fn standardized(params: &PowerParams, x: f64) -> f64 {
    let t = power_transform(x, params.lambda);
    if t.is_infinite() {
        t
    } else {
        (t - params.mu) / params.sigma
    }
}

/// CDF at x > 0: the kernel CDF of the standardized transformed value.
pub fn power_cdf(params: &PowerParams, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("power_cdf requires x > 0"));
    }
    Ok(params.family.kernel_cdf(standardized(params, x)))
}

/// Density at x > 0 (the kernel density times the transform Jacobian).
pub fn power_pdf(params: &PowerParams, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("power_pdf requires x > 0"));
    }
    let z = standardized(params, x);
    let jacobian = match params.lambda {
        PowerLambda::Log => 1.0 / x,
        PowerLambda::Root(r) => {
            let r = r as f64;
            x.powf(1.0 / r - 1.0) / r
        }
    };
    Ok(params.family.kernel_pdf(z) * jacobian / params.sigma)
}

/// k-th raw moment (k = 1 or 2).
///
/// Integer-root exponents reduce to raw moments of the transformed kernel
/// and are always finite. The log cases are the lognormal (finite) and the
/// log-logistic, whose k-th moment exists only while k * sigma < 1 and is
/// reported indeterminate otherwise.
pub fn power_moment(k: u8, params: &PowerParams) -> MomentValue {
    debug_assert!(k == 1 || k == 2);
    let kf = k as f64;
    let (mu, sigma) = (params.mu, params.sigma);
    match (params.family, params.lambda) {
        (PowerFamily::Normal, PowerLambda::Log) => {
            MomentValue::Finite((kf * mu + 0.5 * kf * kf * sigma * sigma).exp())
        }
        (PowerFamily::Normal, PowerLambda::Root(r)) => {
            MomentValue::Finite(normal_raw_moment(k as u32 * r, mu, sigma))
        }
        (PowerFamily::Logistic, PowerLambda::Log) => {
            if kf * sigma < 1.0 {
                let a = kf * std::f64::consts::PI * sigma;
                MomentValue::Finite((kf * mu).exp() * a / a.sin())
            } else {
                MomentValue::Indeterminate
            }
        }
        (PowerFamily::Logistic, PowerLambda::Root(r)) => {
            MomentValue::Finite(logistic_raw_moment(k as u32 * r, mu, sigma))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{moment_by_quadrature, QuadratureSpec};
    use std::f64::consts::PI;

    #[test]
    fn transform_cases() {
        assert_eq!(power_transform(9.0, PowerLambda::Root(2)), 3.0);
        assert_eq!(power_transform(7.5, PowerLambda::Root(1)), 7.5);
        assert_eq!(power_transform(0.0, PowerLambda::Log), f64::NEG_INFINITY);
        assert_eq!(power_transform(f64::INFINITY, PowerLambda::Root(3)), f64::INFINITY);
        assert_eq!(power_transform(f64::INFINITY, PowerLambda::Log), f64::INFINITY);
    }

    #[test]
    fn identity_root_is_plain_kernel() {
        let p = PowerParams::new(PowerFamily::Normal, 2.0, 0.5, PowerLambda::Root(1)).unwrap();
        assert!((power_cdf(&p, 2.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((power_cdf(&p, 2.0 + 0.98).unwrap() - std_normal_cdf(1.96)).abs() < 1e-14);
    }

    #[test]
    fn log_logistic_median() {
        let p = PowerParams::new(PowerFamily::Logistic, 0.0, 1.0, PowerLambda::Log).unwrap();
        assert!((power_cdf(&p, 1.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cube_root_hits_location_at_mu_cubed() {
        let p = PowerParams::new(PowerFamily::Normal, 2.0, 0.5, PowerLambda::Root(3)).unwrap();
        assert!((power_cdf(&p, 8.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn moment_polynomials() {
        let pn = PowerParams::new(PowerFamily::Normal, 4.2, 1.3, PowerLambda::Root(1)).unwrap();
        assert_eq!(power_moment(1, &pn).finite().unwrap(), 4.2);
        let pl = PowerParams::new(PowerFamily::Logistic, 0.0, 1.0, PowerLambda::Root(1)).unwrap();
        let m2 = power_moment(2, &pl).finite().unwrap();
        assert!((m2 - PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn lognormal_case_moment() {
        let p = PowerParams::new(PowerFamily::Normal, 0.0, 1.0, PowerLambda::Log).unwrap();
        let m2 = power_moment(2, &p).finite().unwrap();
        assert!((m2 - (2.0f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn log_logistic_moment_and_exclusion() {
        // Frozen from the closed form at 40 digits: mu=11, sigma=0.3.
        let p = PowerParams::new(PowerFamily::Logistic, 11.0, 0.3, PowerLambda::Log).unwrap();
        let m1 = power_moment(1, &p).finite().unwrap();
        assert!((m1 - 69_751.376_693_064_62).abs() / m1 < 1e-12);
        let m2 = power_moment(2, &p).finite().unwrap();
        assert!((m2 - 7_105_152_428.820_434).abs() / m2 < 1e-12);
        // k sigma >= 1 is indeterminate: sigma = 0.6 kills the variance
        // but not the mean.
        let heavy = PowerParams::new(PowerFamily::Logistic, 11.0, 0.6, PowerLambda::Log).unwrap();
        assert!(power_moment(1, &heavy).is_finite());
        assert_eq!(power_moment(2, &heavy), MomentValue::Indeterminate);
    }

    #[test]
    fn pn_moments_always_finite_across_grid() {
        for &r in PowerFamily::Normal.lambda_grid() {
            let p = PowerParams::new(PowerFamily::Normal, 1.4, 0.12, PowerLambda::Root(r)).unwrap();
            assert!(power_moment(1, &p).is_finite(), "r={r}");
            assert!(power_moment(2, &p).is_finite(), "r={r}");
        }
    }

    #[test]
    fn moments_match_quadrature_when_mass_is_positive() {
        // With mu >> sigma essentially no kernel mass lies below zero, so
        // the positive-axis density integral reproduces the raw moments.
        // The logistic tail decays like e^{-z}, so it needs a wider ratio
        // than the normal to push the sub-zero mass under the tolerance.
        let spec = QuadratureSpec::default();
        for (family, cases) in [
            (PowerFamily::Normal, [(1u32, 9.0, 1.0), (3, 12.0, 1.2), (4, 6.0, 0.5)]),
            (PowerFamily::Logistic, [(1, 30.0, 1.0), (3, 12.0, 0.4), (4, 6.0, 0.2)]),
        ] {
            for &(r, mu, sigma) in &cases {
                let p = PowerParams::new(family, mu, sigma, PowerLambda::Root(r)).unwrap();
                for k in 1..=2u8 {
                    let closed = power_moment(k, &p).finite().unwrap();
                    let quad = moment_by_quadrature(|x| power_pdf(&p, x).unwrap(), k, &spec)
                        .unwrap()
                        .finite()
                        .unwrap();
                    assert!(
                        (closed - quad).abs() / closed.abs() < 1e-7,
                        "{family:?} r={r} k={k}: {closed} vs {quad}"
                    );
                }
            }
        }
    }

    #[test]
    fn grids_match_published_lists() {
        let pn = PowerFamily::Normal.lambda_grid();
        let pl = PowerFamily::Logistic.lambda_grid();
        assert_eq!(pn.len(), 23);
        assert_eq!(pl.len(), 22);
        assert!(pn.contains(&33) && !pl.contains(&33));
        assert!(pn.ends_with(&[25, 33, 50]) && pl.ends_with(&[25, 50]));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(PowerParams::new(PowerFamily::Normal, 0.0, 0.0, PowerLambda::Log).is_err());
        assert!(PowerParams::new(PowerFamily::Normal, 0.0, 1.0, PowerLambda::Root(0)).is_err());
        assert!(PowerParams::new(PowerFamily::Normal, 0.0, 1.0, PowerLambda::Root(51)).is_err());
    }
}
