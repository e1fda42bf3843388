//! Numerical kernels shared by the distribution families: log-gamma,
//! regularized incomplete gamma and beta, the standard normal and logistic
//! CDFs, exact raw-moment recursions for normal and logistic variables, and
//! an adaptive quadrature oracle for cross-checking closed-form moments.

mod beta;
mod cdf;
mod gamma;
mod quad;
mod raw_moments;

pub use beta::reg_inc_beta;
pub use cdf::{std_logistic_cdf, std_normal_cdf};
pub use gamma::{ln_gamma, reg_inc_gamma, reg_inc_gamma_pair};
pub(crate) use gamma::ln_gamma_unchecked;
pub use quad::{integrate, integrate_positive_axis, moment_by_quadrature};
pub use raw_moments::{logistic_raw_moment, normal_raw_moment, MAX_RAW_MOMENT_ORDER};

use thiserror::Error;

/// Errors from the numerical kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialError {
    /// An argument lies outside the function's domain.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// A series, continued fraction, or adaptive integral failed to reach
    /// the requested tolerance within its iteration budget.
    #[error("did not converge: {0}")]
    NonConvergent(&'static str),
}

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    /// Returns an error unless tolerances are positive and at least one
    /// subdivision is allowed.
    pub fn validate(&self) -> Result<(), SpecialError> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(SpecialError::Domain("quadrature tolerances must be > 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(SpecialError::Domain("max_subdivisions must be >= 1"));
        }
        Ok(())
    }
}
