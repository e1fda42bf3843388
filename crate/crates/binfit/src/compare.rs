//! Dagum and generalized beta (GB2) distributions, used as comparison
//! estimators. Both are heavy-tailed families whose higher moments can be
//! indeterminate.

use crate::moment::MomentValue;
use crate::special::{ln_gamma_unchecked as ln_gamma_raw, reg_inc_beta, SpecialError};

/// Dagum parameters: shape `a`, scale `b`, shape `p`, all positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DagumParams {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl DagumParams {
    pub fn new(a: f64, b: f64, p: f64) -> Result<DagumParams, SpecialError> {
        if !(a > 0.0 && b > 0.0 && p > 0.0) {
            return Err(SpecialError::Domain("Dagum requires a, b, p > 0"));
        }
        Ok(DagumParams { a, b, p })
    }
}

/// Dagum CDF F(x) = (1 + (x/b)^{-a})^{-p} for x > 0.
pub fn dagum_cdf(params: &DagumParams, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("dagum_cdf requires x > 0"));
    }
    Ok((1.0 + (x / params.b).powf(-params.a)).powf(-params.p))
}

/// Dagum density at x > 0.
pub fn dagum_pdf(params: &DagumParams, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("dagum_pdf requires x > 0"));
    }
    let (a, b, p) = (params.a, params.b, params.p);
    // exp/log form keeps x^{ap-1} from overflowing for large shapes.
    let log_density = (a * p - 1.0) * x.ln() + a.ln() + p.ln() - a * p * b.ln()
        - (p + 1.0) * (1.0 + (x / b).powf(a)).ln();
    Ok(log_density.exp())
}

/// k-th raw moment of the Dagum distribution:
/// b^k Γ(1 - k/a) Γ(k/a + p) / Γ(p), finite while both gamma arguments are
/// positive (for k > 0 this is the printed k < a condition).
pub fn dagum_moment(k: u8, params: &DagumParams) -> MomentValue {
    debug_assert!(k == 1 || k == 2);
    let kf = k as f64;
    let (a, b, p) = (params.a, params.b, params.p);
    let upper = 1.0 - kf / a;
    let lower = kf / a + p;
    if upper <= 0.0 || lower <= 0.0 {
        return MomentValue::Indeterminate;
    }
    let log_m = kf * b.ln() + ln_gamma_raw(upper) + ln_gamma_raw(lower) - ln_gamma_raw(p);
    MomentValue::Finite(log_m.exp())
}

/// GB2 parameters: `a` nonzero (negative allowed), `b`, `p`, `q` positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gb2Params {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
}

impl Gb2Params {
    pub fn new(a: f64, b: f64, p: f64, q: f64) -> Result<Gb2Params, SpecialError> {
        if a == 0.0 || !a.is_finite() || !(b > 0.0 && p > 0.0 && q > 0.0) {
            return Err(SpecialError::Domain("GB2 requires a != 0 and b, p, q > 0"));
        }
        Ok(Gb2Params { a, b, p, q })
    }

    /// Dagum is the q = 1 special case of GB2.
    pub fn from_dagum(d: &DagumParams) -> Gb2Params {
        Gb2Params { a: d.a, b: d.b, p: d.p, q: 1.0 }
    }
}

/// GB2 CDF at x > 0: the regularized incomplete beta of
/// u = (x/b)^a / (1 + (x/b)^a); a negative `a` reflects the argument.
pub fn gb2_cdf(params: &Gb2Params, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("gb2_cdf requires x > 0"));
    }
    let (a, b, p, q) = (params.a, params.b, params.p, params.q);
    let ratio = (x / b).powf(a.abs());
    let u = if ratio.is_infinite() { 1.0 } else { ratio / (1.0 + ratio) };
    if a > 0.0 {
        reg_inc_beta(p, q, u)
    } else {
        // GB2(-a, b, p, q) is GB2(a, b, q, p): swap the tails.
        reg_inc_beta(q, p, u)
    }
}

/// GB2 density at x > 0.
pub fn gb2_pdf(params: &Gb2Params, x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain("gb2_pdf requires x > 0"));
    }
    let (a, b, p, q) = (params.a, params.b, params.p, params.q);
    let ln_beta = ln_gamma_raw(p) + ln_gamma_raw(q) - ln_gamma_raw(p + q);
    let log_density = (a * p - 1.0) * x.ln() + a.abs().ln() - a * p * b.ln() - ln_beta
        - (p + q) * ln_1p_pow(x / b, a);
    Ok(log_density.exp())
}

/// ln(1 + r^a) without overflow for large r^a.
fn ln_1p_pow(r: f64, a: f64) -> f64 {
    let t = a * r.ln();
    if t > 700.0 {
        t // 1 + e^t ~ e^t
    } else {
        t.exp().ln_1p()
    }
}

/// k-th raw moment of the GB2 distribution:
/// b^k B(p + k/a, q - k/a) / B(p, q), finite while both beta arguments are
/// positive (a condition strictly wider than the printed k < a when q is
/// small, and the correct one for negative a).
pub fn gb2_moment(k: u8, params: &Gb2Params) -> MomentValue {
    debug_assert!(k == 1 || k == 2);
    let kf = k as f64;
    let (a, b, p, q) = (params.a, params.b, params.p, params.q);
    let arg1 = p + kf / a;
    let arg2 = q - kf / a;
    if arg1 <= 0.0 || arg2 <= 0.0 {
        return MomentValue::Indeterminate;
    }
    // The lnΓ(p+q) terms of the two beta functions cancel.
    let log_m = kf * b.ln() + ln_gamma_raw(arg1) + ln_gamma_raw(arg2)
        - ln_gamma_raw(p)
        - ln_gamma_raw(q);
    MomentValue::Finite(log_m.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{moment_by_quadrature, QuadratureSpec};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn dagum_median_at_scale_when_p_is_one() {
        let d = DagumParams::new(2.0, 7.0, 1.0).unwrap();
        assert!((dagum_cdf(&d, 7.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dagum_cdf_limits_and_frozen_point() {
        let d = DagumParams::new(2.0, 1.0, 1.5).unwrap();
        assert!(dagum_cdf(&d, 1e-9).unwrap() < 1e-12);
        assert!(dagum_cdf(&d, 1e9).unwrap() > 1.0 - 1e-12);
        // F(2) = (1 + 2^{-2})^{-1.5} = 1.25^{-1.5}
        let v = dagum_cdf(&d, 2.0).unwrap();
        assert!((v - 1.25f64.powf(-1.5)).abs() < 1e-14);
    }

    #[test]
    fn dagum_moment_known_values() {
        // a=2, b=1, p=1: E(X) = Γ(1/2)Γ(3/2) = π/2.
        let d = DagumParams::new(2.0, 1.0, 1.0).unwrap();
        let m = dagum_moment(1, &d).finite().unwrap();
        assert!((m - FRAC_PI_2).abs() < 1e-13);
        // a=2, b=1, p=1.5: E(X) = Γ(1/2)Γ(2)/Γ(1.5) = 2 exactly.
        let d = DagumParams::new(2.0, 1.0, 1.5).unwrap();
        let m = dagum_moment(1, &d).finite().unwrap();
        assert!((m - 2.0).abs() < 1e-13);
    }

    #[test]
    fn dagum_indeterminate_when_k_reaches_a() {
        let d = DagumParams::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(dagum_moment(2, &d), MomentValue::Indeterminate);
        let d = DagumParams::new(0.9, 1.0, 1.0).unwrap();
        assert_eq!(dagum_moment(1, &d), MomentValue::Indeterminate);
    }

    #[test]
    fn dagum_scale_law() {
        let d1 = DagumParams::new(3.0, 1.0, 0.8).unwrap();
        let d2 = DagumParams::new(3.0, 2.0, 0.8).unwrap();
        let m1 = dagum_moment(1, &d1).finite().unwrap();
        let m2 = dagum_moment(1, &d2).finite().unwrap();
        assert!((m2 / m1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dagum_moment_matches_quadrature() {
        let spec = QuadratureSpec::default();
        let d = DagumParams::new(3.5, 40_000.0, 1.2).unwrap();
        for k in 1..=2u8 {
            let closed = dagum_moment(k, &d).finite().unwrap();
            let quad = moment_by_quadrature(|x| dagum_pdf(&d, x).unwrap(), k, &spec)
                .unwrap()
                .finite()
                .unwrap();
            assert!((closed - quad).abs() / closed < 1e-7, "k={k}");
        }
    }

    #[test]
    fn gb2_uniform_like_case() {
        // p=q=1, a=1, b=1 at x=1: u = 1/2 and I_{1/2}(1,1) = 1/2.
        let g = Gb2Params::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((gb2_cdf(&g, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!(gb2_cdf(&g, 1e-10).unwrap() < 1e-9);
        assert!(gb2_cdf(&g, 1e10).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn gb2_cdf_frozen_point() {
        // a=2, b=3, p=1.2, q=0.8 at x=3: u=0.5, I_{0.5}(1.2, 0.8); frozen
        // from a 40-digit evaluation.
        let g = Gb2Params::new(2.0, 3.0, 1.2, 0.8).unwrap();
        let v = gb2_cdf(&g, 3.0).unwrap();
        assert!((v - 0.363_263_185_965_429_4).abs() < 1e-13, "{v}");
    }

    #[test]
    fn gb2_negative_a_is_parameter_swap() {
        let pos = Gb2Params::new(1.7, 2.0, 0.9, 2.3).unwrap();
        let neg = Gb2Params::new(-1.7, 2.0, 2.3, 0.9).unwrap();
        for &x in &[0.3, 1.0, 2.0, 9.0] {
            let u = gb2_cdf(&pos, x).unwrap();
            let v = gb2_cdf(&neg, x).unwrap();
            assert!((u - v).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn gb2_moment_known_value() {
        // a=1, b=1, p=1, q=3: B(2,2)/B(1,3) = 1/2.
        let g = Gb2Params::new(1.0, 1.0, 1.0, 3.0).unwrap();
        let m = gb2_moment(1, &g).finite().unwrap();
        assert!((m - 0.5).abs() < 1e-13);
    }

    #[test]
    fn gb2_moment_scale_law_and_indeterminacy() {
        let g1 = Gb2Params::new(2.0, 1.0, 1.1, 2.0).unwrap();
        let g2 = Gb2Params::new(2.0, 3.0, 1.1, 2.0).unwrap();
        let r = gb2_moment(2, &g2).finite().unwrap() / gb2_moment(2, &g1).finite().unwrap();
        assert!((r - 9.0).abs() < 1e-11);
        // q - k/a <= 0 is indeterminate.
        let heavy = Gb2Params::new(2.0, 1.0, 1.0, 0.9).unwrap();
        assert_eq!(gb2_moment(2, &heavy), MomentValue::Indeterminate);
        assert!(gb2_moment(1, &heavy).is_finite());
    }

    #[test]
    fn gb2_moment_matches_quadrature() {
        let spec = QuadratureSpec::default();
        let g = Gb2Params::new(2.5, 50_000.0, 1.4, 2.2).unwrap();
        for k in 1..=2u8 {
            let closed = gb2_moment(k, &g).finite().unwrap();
            let quad = moment_by_quadrature(|x| gb2_pdf(&g, x).unwrap(), k, &spec)
                .unwrap()
                .finite()
                .unwrap();
            assert!((closed - quad).abs() / closed < 1e-7, "k={k}");
        }
    }

    #[test]
    fn gb2_nests_dagum_at_q_one() {
        let d = DagumParams::new(2.4, 1.7, 0.9).unwrap();
        let g = Gb2Params::from_dagum(&d);
        for i in 1..=50 {
            let x = 0.2 * i as f64;
            let fd = dagum_cdf(&d, x).unwrap();
            let fg = gb2_cdf(&g, x).unwrap();
            assert!((fd - fg).abs() < 1e-6, "x={x}: {fd} vs {fg}");
        }
        // Moments agree too.
        let md = dagum_moment(1, &d).finite().unwrap();
        let mg = gb2_moment(1, &g).finite().unwrap();
        assert!((md - mg).abs() / md < 1e-12);
    }

    #[test]
    fn parameter_validation() {
        assert!(DagumParams::new(0.0, 1.0, 1.0).is_err());
        assert!(Gb2Params::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(Gb2Params::new(1.0, -1.0, 1.0, 1.0).is_err());
        let d = DagumParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(dagum_cdf(&d, 0.0).is_err());
        let g = Gb2Params::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(gb2_cdf(&g, -2.0).is_err());
    }
}
