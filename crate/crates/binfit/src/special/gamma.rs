//! Log-gamma and the regularized incomplete gamma function.

use super::SpecialError;

/// Stirling-series coefficients B_{2j} / (2j (2j - 1)).
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_74;

/// Natural log of the gamma function for x > 0.
///
/// Uses the ascending recurrence to reach x >= 10, then the Stirling
/// series. Relative error is below 1e-13 across [1e-3, 1e6], which keeps
/// moment formulas usable where Γ itself would overflow (Γ(171) already
/// exceeds the f64 range while lnΓ(171) ≈ 706.57).
pub fn ln_gamma(x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("ln_gamma requires x > 0"));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift += y.ln();
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = STIRLING[6];
    for c in STIRLING[..6].iter().rev() {
        series = series * inv2 + c;
    }
    (y - 0.5) * y.ln() - y + HALF_LN_TWO_PI + series * inv - shift
}

/// Regularized lower incomplete gamma function P(a, x).
///
/// P(a, x) = γ(a, x) / Γ(a) for a > 0, x >= 0. Monotone in x with
/// P(a, 0) = 0 and P(a, ∞) = 1.
pub fn reg_inc_gamma(shape: f64, x: f64) -> Result<f64, SpecialError> {
    reg_inc_gamma_pair(shape, x).map(|(p, _q)| p)
}

/// Both tails of the regularized incomplete gamma: (P(a, x), Q(a, x)).
///
/// Computes whichever tail is numerically natural (series for x < a + 1,
/// Lentz continued fraction otherwise) and complements the other, so the
/// small tail is always available without cancellation.
pub fn reg_inc_gamma_pair(shape: f64, x: f64) -> Result<(f64, f64), SpecialError> {
    if !(shape > 0.0) {
        return Err(SpecialError::Domain("reg_inc_gamma requires shape > 0"));
    }
    if !(x >= 0.0) {
        return Err(SpecialError::Domain("reg_inc_gamma requires x >= 0"));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    // exp underflows to 0 for extreme x; both tails then saturate exactly.
    let log_prefactor = shape * x.ln() - x - ln_gamma_unchecked(shape);
    let prefactor = log_prefactor.exp();
    if x < shape + 1.0 {
        let p = lower_series(shape, x, prefactor)?;
        Ok((p, 1.0 - p))
    } else {
        let q = upper_cf(shape, x, prefactor)?;
        Ok((1.0 - q, q))
    }
}

/// P(a, x) by the ascending series, valid (and fast) for x < a + 1.
fn lower_series(a: f64, x: f64, prefactor: f64) -> Result<f64, SpecialError> {
    if prefactor == 0.0 {
        // Underflow: with x < a + 1 the lower tail is negligible.
        return Ok(0.0);
    }
    let max_iter = series_budget(a);
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..max_iter {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok((prefactor * sum).clamp(0.0, 1.0));
        }
    }
    Err(SpecialError::NonConvergent("incomplete gamma series"))
}

/// Q(a, x) by the modified Lentz continued fraction, for x >= a + 1.
fn upper_cf(a: f64, x: f64, prefactor: f64) -> Result<f64, SpecialError> {
    if prefactor == 0.0 {
        // Underflow: with x >= a + 1 the upper tail is negligible.
        return Ok(0.0);
    }
    let max_iter = series_budget(a);
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b.max(TINY);
    let mut f = d;
    for i in 1..max_iter {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok((prefactor * f).clamp(0.0, 1.0));
        }
    }
    Err(SpecialError::NonConvergent("incomplete gamma continued fraction"))
}

/// Iteration budget; the transition region x ≈ a needs O(sqrt(a)) terms.
fn series_budget(a: f64) -> usize {
    200 + (10.0 * a.sqrt()).min(2e6) as usize
}
