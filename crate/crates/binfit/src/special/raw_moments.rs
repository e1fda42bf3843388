//! Exact raw-moment recursions for normal and logistic variables.
//!
//! These generate, at runtime, the same per-exponent polynomials that the
//! power-transform families need for their mean and variance formulas,
//! instead of evaluating confluent hypergeometric functions or Bernoulli
//! polynomials directly.

use std::sync::OnceLock;

/// Largest raw-moment order supported (second moment at the deepest
/// root-transform grid point, 2 x 50).
pub const MAX_RAW_MOMENT_ORDER: u32 = 100;

/// E(Z^n) for Z ~ Normal(mu, sigma), by the recursion
/// m_n = mu * m_{n-1} + (n - 1) * sigma^2 * m_{n-2}.
///
/// For mu < 0 the symmetry E(Z^n; mu) = (-1)^n E(Z^n; -mu) is applied first
/// so every recursion term is nonnegative and nothing cancels.
///
/// # Panics
/// If `n` is 0 or exceeds [`MAX_RAW_MOMENT_ORDER`].
pub fn normal_raw_moment(n: u32, mu: f64, sigma: f64) -> f64 {
    assert!(
        (1..=MAX_RAW_MOMENT_ORDER).contains(&n),
        "raw moment order must be in 1..={MAX_RAW_MOMENT_ORDER}"
    );
    let sign = if mu < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let mu = mu.abs();
    let var = sigma * sigma;
    let mut prev = 1.0; // m_0
    let mut cur = mu; // m_1
    for order in 2..=n as u64 {
        let next = mu * cur + (order - 1) as f64 * var * prev;
        prev = cur;
        cur = next;
    }
    if n == 1 {
        cur = mu;
    }
    sign * cur
}

/// E(Z^n) for Z ~ Logistic(mu, sigma), by binomial expansion over the
/// closed-form central moments (odd central moments vanish; even ones are
/// 2 (2m)! eta(2m) sigma^{2m} with eta the Dirichlet eta function).
///
/// # Panics
/// If `n` is 0 or exceeds [`MAX_RAW_MOMENT_ORDER`].
pub fn logistic_raw_moment(n: u32, mu: f64, sigma: f64) -> f64 {
    assert!(
        (1..=MAX_RAW_MOMENT_ORDER).contains(&n),
        "raw moment order must be in 1..={MAX_RAW_MOMENT_ORDER}"
    );
    let sign = if mu < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let mu = mu.abs();
    let central = central_moment_table();
    let n = n as usize;
    // sum over even central orders 2m <= n of C(n, 2m) mu^{n-2m} c_{2m} s^{2m}
    let mut sum = 0.0;
    let mut binom = 1.0; // C(n, 2m), updated incrementally
    let mut mu_pow = mu.powi(n as i32);
    let mut sig_pow = 1.0;
    let mut m2 = 0usize;
    loop {
        sum += binom * mu_pow * central[m2 / 2] * sig_pow;
        if m2 + 2 > n {
            break;
        }
        // C(n, 2m+2) = C(n, 2m) * (n-2m)(n-2m-1) / ((2m+1)(2m+2))
        binom *= ((n - m2) * (n - m2 - 1)) as f64 / ((m2 + 1) * (m2 + 2)) as f64;
        mu_pow = if mu == 0.0 {
            if m2 + 2 == n {
                1.0
            } else {
                0.0
            }
        } else {
            mu_pow / (mu * mu)
        };
        sig_pow *= sigma * sigma;
        m2 += 2;
    }
    sign * sum
}

/// Central moments c_{2m} of the standard logistic for 2m = 0..=100:
/// c_{2m} = 2 (2m)! (1 - 2^{1-2m}) zeta(2m).
fn central_moment_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let half = MAX_RAW_MOMENT_ORDER as usize / 2;
        let mut table = Vec::with_capacity(half + 1);
        table.push(1.0); // c_0
        let mut factorial = 1.0f64;
        for m in 1..=half {
            let order = 2 * m;
            factorial *= ((order - 1) * order) as f64;
            let zeta = if order == 2 {
                std::f64::consts::PI * std::f64::consts::PI / 6.0
            } else {
                zeta_even(order as u32)
            };
            let eta_factor = 1.0 - (2.0f64).powi(1 - order as i32);
            table.push(2.0 * factorial * eta_factor * zeta);
        }
        table
    })
}

/// zeta(s) for even integer s >= 4: direct sum of the first 1000 terms
/// (smallest first, so rounding stays at one ulp) plus the Euler-Maclaurin
/// tail, which leaves the truncation error far below f64 precision.
fn zeta_even(s: u32) -> f64 {
    let s = s as i32;
    const N: u64 = 1000;
    let mut sum = 0.0;
    for i in (1..=N).rev() {
        sum += (i as f64).powi(-s);
    }
    let n = N as f64;
    sum + n.powi(1 - s) / (s - 1) as f64 - 0.5 * n.powi(-s)
        + (s as f64) * n.powi(-s - 1) / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normal_low_order_polynomials() {
        // E(Z) = mu, E(Z^2) = mu^2 + sigma^2
        assert_eq!(normal_raw_moment(1, 3.5, 2.0), 3.5);
        assert!((normal_raw_moment(2, 1.0, 1.0) - 2.0).abs() < 1e-15);
        // E(Z^4) = mu^4 + 6 mu^2 s^2 + 3 s^4
        assert!((normal_raw_moment(4, 1.0, 1.0) - 10.0).abs() < 1e-14);
        // odd central symmetry
        assert_eq!(normal_raw_moment(3, 0.0, 1.7), 0.0);
    }

    #[test]
    fn normal_eighth_moment_exact() {
        // E((1+Z)^8), Z std normal: sum C(8,2m)(2m-1)!! = 764 exactly.
        assert!((normal_raw_moment(8, 1.0, 1.0) - 764.0).abs() / 764.0 < 1e-14);
    }

    #[test]
    fn normal_negative_mu_symmetry() {
        for n in 1..=9 {
            let pos = normal_raw_moment(n, 2.3, 0.7);
            let neg = normal_raw_moment(n, -2.3, 0.7);
            let expect = if n % 2 == 1 { -pos } else { pos };
            assert_eq!(neg, expect, "n={n}");
        }
    }

    #[test]
    fn logistic_low_order_polynomials() {
        assert_eq!(logistic_raw_moment(1, 4.2, 0.3), 4.2);
        // E(Z^2) = mu^2 + pi^2 s^2 / 3
        let v = logistic_raw_moment(2, 0.0, 1.0);
        assert!((v - PI * PI / 3.0).abs() < 1e-13);
        // E(Z^4) central = 7 pi^4 / 15
        let v4 = logistic_raw_moment(4, 0.0, 1.0);
        assert!((v4 - 7.0 * PI.powi(4) / 15.0).abs() / v4 < 1e-13);
    }

    #[test]
    fn logistic_sixth_moment_frozen() {
        // E(Z^6) for Logistic(1.3, 0.4); frozen from a 40-digit quadrature.
        let v = logistic_raw_moment(6, 1.3, 0.4);
        assert!((v - 62.690_835_974_160_81).abs() / v < 1e-13);
    }

    #[test]
    fn logistic_highest_order_is_finite() {
        let v = logistic_raw_moment(MAX_RAW_MOMENT_ORDER, 1.2, 0.05);
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn central_table_matches_bernoulli_constants() {
        let t = central_moment_table();
        assert!((t[1] - PI * PI / 3.0).abs() < 1e-14);
        assert!((t[2] - 7.0 * PI.powi(4) / 15.0).abs() / t[2] < 1e-14);
        // c_6 = 31 pi^6 / 21
        assert!((t[3] - 31.0 * PI.powi(6) / 21.0).abs() / t[3] < 1e-13);
    }

    #[test]
    #[should_panic]
    fn order_zero_rejected() {
        normal_raw_moment(0, 0.0, 1.0);
    }
}
