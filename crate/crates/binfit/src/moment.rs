//! Moment values that may be finite, infinite, or indeterminate, and the
//! mean/variance/sd/cv summary built from the first two raw moments.

/// A first or second raw moment, or a statistic derived from them.
///
/// `PlusInfinity` marks a moment whose defining integral diverges to +∞
/// under the fitted parameters; `Indeterminate` marks one whose integral
/// diverges without a usable direction (heavy-tail families) or that is
/// downstream of such a value. Both are distinct from numeric overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentValue {
    Finite(f64),
    PlusInfinity,
    Indeterminate,
}

impl MomentValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, MomentValue::Finite(_))
    }

    /// The value when finite.
    pub fn finite(&self) -> Option<f64> {
        match self {
            MomentValue::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

impl std::fmt::Display for MomentValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentValue::Finite(v) => write!(f, "{v}"),
            MomentValue::PlusInfinity => write!(f, "+inf"),
            MomentValue::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Mean, second moment, variance, sd, and coefficient of variation, each
/// carrying its own finiteness classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean: MomentValue,
    pub second_moment: MomentValue,
    pub variance: MomentValue,
    pub sd: MomentValue,
    pub cv: MomentValue,
    /// Set when floating-point cancellation produced a negative variance
    /// that was clamped to zero.
    pub variance_clamped: bool,
}

impl MomentSummary {
    /// Summary with every field indeterminate.
    pub fn indeterminate() -> Self {
        MomentSummary {
            mean: MomentValue::Indeterminate,
            second_moment: MomentValue::Indeterminate,
            variance: MomentValue::Indeterminate,
            sd: MomentValue::Indeterminate,
            cv: MomentValue::Indeterminate,
            variance_clamped: false,
        }
    }
}

/// Combines the first two raw moments into a [`MomentSummary`].
///
/// Propagation: an indeterminate input makes everything downstream
/// indeterminate; an infinite second moment with a finite mean gives an
/// infinite variance, sd, and cv; an infinite mean leaves the derived
/// statistics indeterminate (the variance would be ∞ - ∞). The cv is
/// sd / mean and needs a strictly positive finite mean.
pub fn summarize_moments(m1: MomentValue, m2: MomentValue) -> MomentSummary {
    use MomentValue::*;
    let (variance, clamped) = match (m1, m2) {
        (Indeterminate, _) | (_, Indeterminate) => (Indeterminate, false),
        (PlusInfinity, _) => (Indeterminate, false),
        (Finite(_), PlusInfinity) => (PlusInfinity, false),
        (Finite(mean), Finite(second)) => {
            let v = second - mean * mean;
            if v < 0.0 {
                (Finite(0.0), true)
            } else {
                (Finite(v), false)
            }
        }
    };
    let sd = match variance {
        Finite(v) => Finite(v.sqrt()),
        other => other,
    };
    let cv = match (sd, m1) {
        (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
        (_, PlusInfinity) => Indeterminate,
        (_, Finite(mean)) if mean <= 0.0 => Indeterminate,
        (Finite(s), Finite(mean)) => Finite(s / mean),
        (PlusInfinity, Finite(_)) => PlusInfinity,
    };
    MomentSummary {
        mean: m1,
        second_moment: m2,
        variance,
        sd,
        cv,
        variance_clamped: clamped,
    }
}
