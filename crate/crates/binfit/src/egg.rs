//! The extended generalized gamma (EGG) family: a three-parameter
//! distribution over positive reals that nests the lognormal (shape 0),
//! gamma, Weibull, and exponential shapes.

use crate::moment::MomentValue;
use crate::special::{ln_gamma_unchecked as ln_gamma_raw, reg_inc_gamma_pair, std_normal_cdf, SpecialError};

/// Parameters of the EGG distribution: log-scale location `mu`, log-scale
/// spread `sigma > 0`, and shape `lambda` (`lambda = 0` is the lognormal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EggParams {
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl EggParams {
    pub fn new(mu: f64, sigma: f64, lambda: f64) -> Result<EggParams, SpecialError> {
        if !(sigma > 0.0) || !mu.is_finite() || !lambda.is_finite() {
            return Err(SpecialError::Domain("EGG requires finite mu, lambda and sigma > 0"));
        }
        Ok(EggParams { mu, sigma, lambda })
    }
}

/// Below this |lambda| the incomplete-gamma shape exceeds 1e8 and the exact
/// CDF becomes a normal perturbed at O(1/shape); a Wilson-Hilferty step
/// keeps evaluation O(1) there.
const LAMBDA_NORMAL_APPROX: f64 = 1e-4;

/// CDF of the EGG distribution at x > 0.
pub fn egg_cdf(params: &EggParams, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("egg_cdf requires x > 0"));
    }
    let omega = (x.ln() - params.mu) / params.sigma;
    let lambda = params.lambda;
    if lambda == 0.0 {
        return Ok(std_normal_cdf(omega));
    }
    if lambda.abs() < LAMBDA_NORMAL_APPROX {
        let root = (lambda * omega / 3.0).exp();
        let z = (3.0 / lambda.abs()) * (root - 1.0) + lambda.abs() / 3.0;
        return Ok(if lambda > 0.0 {
            std_normal_cdf(z)
        } else {
            1.0 - std_normal_cdf(z)
        });
    }
    let shape = 1.0 / (lambda * lambda);
    let arg = shape * (lambda * omega).exp();
    if !arg.is_finite() {
        // e^{lambda omega} overflowed: the gamma CDF has saturated.
        return Ok(if lambda > 0.0 { 1.0 } else { 0.0 });
    }
    let (p, q) = reg_inc_gamma_pair(shape, arg)?;
    Ok(if lambda > 0.0 { p } else { q })
}

/// Density of the EGG distribution at x > 0.
pub fn egg_pdf(params: &EggParams, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("egg_pdf requires x > 0"));
    }
    let omega = (x.ln() - params.mu) / params.sigma;
    let lambda = params.lambda;
    if lambda == 0.0 {
        let phi = (-0.5 * omega * omega).exp() / (2.0 * std::f64::consts::PI).sqrt();
        return Ok(phi / (params.sigma * x));
    }
    // Standard log-gamma kernel with shape k = lambda^{-2}, evaluated at
    // z = lambda omega + ln k: exp(k z - e^z) / Gamma(k).
    let shape = 1.0 / (lambda * lambda);
    let z = lambda * omega + shape.ln();
    let log_kernel = shape * z - z.exp() - ln_gamma_raw(shape);
    Ok(lambda.abs() / (params.sigma * x) * log_kernel.exp())
}

/// Whether [`egg_moment`] would use the near-lognormal linear fallback
/// instead of the exact log-gamma form for these parameters.
pub fn egg_moment_uses_fallback(params: &EggParams) -> bool {
    let lambda = params.lambda;
    lambda != 0.0 && 1.0 / (lambda * lambda) > LN_GAMMA_PRECISION_LIMIT
}

/// Above this incomplete-gamma shape the lnΓ difference in the moment
/// formula loses all significant digits, so the near-zero-lambda linear
/// interpolation takes over.
const LN_GAMMA_PRECISION_LIMIT: f64 = 1e15;

/// k-th raw moment (k = 1 or 2) of the EGG distribution.
///
/// Returns `PlusInfinity` when k·lambda·sigma <= -1 (the defining integral
/// diverges). Otherwise evaluates the lnΓ form of the moment formula; for
/// |lambda| so small that the lnΓ difference is numerically meaningless
/// (see [`egg_moment_uses_fallback`]) it interpolates linearly from the
/// lognormal case instead.
pub fn egg_moment(k: u8, params: &EggParams) -> MomentValue {
    debug_assert!(k == 1 || k == 2);
    let kf = k as f64;
    let (mu, sigma, lambda) = (params.mu, params.sigma, params.lambda);
    let lognormal = || (kf * mu + 0.5 * (kf * sigma).powi(2)).exp();
    if lambda == 0.0 {
        return MomentValue::Finite(lognormal());
    }
    if kf * lambda * sigma <= -1.0 {
        return MomentValue::PlusInfinity;
    }
    if egg_moment_uses_fallback(params) {
        // Linear-in-lambda correction to the lognormal moment.
        let slope = if k == 1 { 0.5 } else { 1.5 };
        return MomentValue::Finite(lognormal() + slope * lambda);
    }
    let inv = 1.0 / lambda;
    let arg = inv * (kf * sigma + inv);
    let exponent = kf * mu + (kf * sigma / lambda) * (lambda * lambda).ln() + ln_gamma_raw(arg)
        - ln_gamma_raw(inv * inv);
    MomentValue::Finite(exponent.exp())
}
