//! Best-of-breed selection among the EGG, PN, and PL fits, and the
//! accuracy metrics used to evaluate estimators against known means.

use thiserror::Error;

use crate::fit::{Family, FitResult};
use crate::moment::MomentValue;

/// Why a candidate was removed from best-of-breed contention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationReason {
    /// The fitted variance is infinite or indeterminate.
    NonFiniteVariance,
    /// The fit itself failed, so there is nothing to choose.
    FitFailed,
}

/// One surviving candidate's score.
#[derive(Debug, Clone, Copy)]
pub struct Candidate {
    pub family: Family,
    pub loglik: f64,
    pub variance_finite: bool,
}

/// The best-of-breed choice with its audit trail.
#[derive(Debug, Clone)]
pub struct BestOfBreed {
    pub chosen: FitResult,
    pub candidates: Vec<Candidate>,
    pub eliminated: Vec<(Family, EliminationReason)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectError {
    #[error("no candidate with a finite variance survived")]
    NoViableCandidate,
    #[error("true value must be strictly positive")]
    NonPositiveTruth,
    #[error("cannot aggregate an empty result set")]
    EmptyInput,
}

/// Picks among the EGG, PN, and PL fits: candidates whose variance is not
/// finite are eliminated, and the highest log-likelihood survivor wins.
/// Exact ties break deterministically PN, then EGG, then PL. A failed fit
/// is passed as `None` and recorded as eliminated.
pub fn best_of_breed(
    egg: Option<FitResult>,
    pn: Option<FitResult>,
    pl: Option<FitResult>,
) -> Result<BestOfBreed, SelectError> {
    let mut candidates = Vec::new();
    let mut eliminated = Vec::new();
    let mut chosen: Option<FitResult> = None;
    // Tie-break order: PN first (its variance is always finite), then EGG,
    // then PL; a later candidate must be strictly better to displace.
    let ordered = [(Family::Pn, pn), (Family::Egg, egg), (Family::Pl, pl)];
    for (family, fit) in ordered {
        let Some(fit) = fit else {
            eliminated.push((family, EliminationReason::FitFailed));
            continue;
        };
        debug_assert_eq!(fit.family, family);
        let variance_finite = fit.moments.variance.is_finite();
        if !variance_finite {
            eliminated.push((family, EliminationReason::NonFiniteVariance));
            continue;
        }
        candidates.push(Candidate { family, loglik: fit.loglik, variance_finite });
        if chosen.as_ref().map_or(true, |c| fit.loglik > c.loglik) {
            chosen = Some(fit);
        }
    }
    let chosen = chosen.ok_or(SelectError::NoViableCandidate)?;
    Ok(BestOfBreed { chosen, candidates, eliminated })
}

/// (estimate - truth) / truth.
pub fn relative_error(estimate: f64, truth: f64) -> Result<f64, SelectError> {
    if !(truth > 0.0) {
        return Err(SelectError::NonPositiveTruth);
    }
    Ok((estimate - truth) / truth)
}

/// One unit's evaluation input: the known mean and the estimator's mean
/// and variance (either may be non-finite).
#[derive(Debug, Clone)]
pub struct UnitEval {
    pub id: String,
    pub true_mean: f64,
    pub est_mean: MomentValue,
    pub est_variance: MomentValue,
}

/// One row of the per-unit report.
#[derive(Debug, Clone)]
pub struct UnitOutcome {
    pub id: String,
    pub true_mean: f64,
    pub est_mean: MomentValue,
    /// Present only when the estimated mean is finite.
    pub relative_error: Option<f64>,
}

/// Accuracy summary for one estimator over many units. Units with an
/// undefined mean are counted in the shares but excluded from the bias
/// and RMSRE, which are `None` when no unit had a defined estimate.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub per_unit: Vec<UnitOutcome>,
    pub relative_bias: Option<f64>,
    pub rmsre: Option<f64>,
    pub undefined_mean_share: f64,
    pub undefined_variance_share: f64,
}

/// Aggregates per-unit evaluations into relative bias, RMSRE, and
/// undefined-moment shares.
pub fn aggregate(units: &[UnitEval]) -> Result<EvalReport, SelectError> {
    if units.is_empty() {
        return Err(SelectError::EmptyInput);
    }
    let mut per_unit = Vec::with_capacity(units.len());
    let mut errors = Vec::new();
    let mut undefined_mean = 0usize;
    let mut undefined_variance = 0usize;
    for unit in units {
        let relative = match unit.est_mean {
            MomentValue::Finite(est) => {
                let e = relative_error(est, unit.true_mean)?;
                errors.push(e);
                Some(e)
            }
            _ => {
                undefined_mean += 1;
                None
            }
        };
        if !unit.est_variance.is_finite() {
            undefined_variance += 1;
        }
        per_unit.push(UnitOutcome {
            id: unit.id.clone(),
            true_mean: unit.true_mean,
            est_mean: unit.est_mean,
            relative_error: relative,
        });
    }
    let n_defined = errors.len() as f64;
    let (relative_bias, rmsre) = if errors.is_empty() {
        (None, None)
    } else {
        let bias = errors.iter().sum::<f64>() / n_defined;
        let msre = errors.iter().map(|e| e * e).sum::<f64>() / n_defined;
        (Some(bias), Some(msre.sqrt()))
    };
    Ok(EvalReport {
        per_unit,
        relative_bias,
        rmsre,
        undefined_mean_share: undefined_mean as f64 / units.len() as f64,
        undefined_variance_share: undefined_variance as f64 / units.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::{FamilyParams, FitFlags};
    use crate::moment::summarize_moments;
    use crate::power::{PowerFamily, PowerLambda, PowerParams};

    fn fake_fit(family: Family, loglik: f64, m1: MomentValue, m2: MomentValue) -> FitResult {
        let params = PowerParams::new(PowerFamily::Normal, 1.0, 1.0, PowerLambda::Root(1))
            .expect("valid placeholder params");
        FitResult {
            family,
            params: FamilyParams::Power(params),
            loglik,
            moments: summarize_moments(m1, m2),
            flags: FitFlags::default(),
        }
    }

    use MomentValue::{Finite, PlusInfinity};

    #[test]
    fn infinite_variance_candidate_is_eliminated() {
        let egg = fake_fit(Family::Egg, -50.0, Finite(1.0), PlusInfinity);
        let pn = fake_fit(Family::Pn, -100.0, Finite(1.0), Finite(2.0));
        let pl = fake_fit(Family::Pl, -99.0, Finite(1.0), Finite(2.0));
        let b = best_of_breed(Some(egg), Some(pn), Some(pl)).unwrap();
        assert_eq!(b.chosen.family, Family::Pl);
        assert_eq!(b.eliminated, vec![(Family::Egg, EliminationReason::NonFiniteVariance)]);
        assert_eq!(b.candidates.len(), 2);
    }

    #[test]
    fn highest_loglik_wins_when_all_finite() {
        let egg = fake_fit(Family::Egg, -10.0, Finite(1.0), Finite(2.0));
        let pn = fake_fit(Family::Pn, -12.0, Finite(1.0), Finite(2.0));
        let pl = fake_fit(Family::Pl, -11.0, Finite(1.0), Finite(2.0));
        let b = best_of_breed(Some(egg), Some(pn), Some(pl)).unwrap();
        assert_eq!(b.chosen.family, Family::Egg);
        assert_eq!(b.chosen.loglik, -10.0);
    }

    #[test]
    fn exact_tie_prefers_pn_then_egg() {
        let egg = fake_fit(Family::Egg, -5.0, Finite(1.0), Finite(2.0));
        let pn = fake_fit(Family::Pn, -5.0, Finite(1.0), Finite(2.0));
        let pl = fake_fit(Family::Pl, -5.0, Finite(1.0), Finite(2.0));
        let b = best_of_breed(Some(egg.clone()), Some(pn), Some(pl.clone())).unwrap();
        assert_eq!(b.chosen.family, Family::Pn);
        let b = best_of_breed(Some(egg), None, Some(pl)).unwrap();
        assert_eq!(b.chosen.family, Family::Egg);
    }

    #[test]
    fn all_failed_is_no_viable_candidate() {
        assert_eq!(best_of_breed(None, None, None).unwrap_err(), SelectError::NoViableCandidate);
    }

    #[test]
    fn relative_error_cases() {
        assert_eq!(relative_error(1.0, 1.0).unwrap(), 0.0);
        assert!((relative_error(1.05, 1.0).unwrap() - 0.05).abs() < 1e-15);
        assert!((relative_error(0.97, 1.0).unwrap() + 0.03).abs() < 1e-15);
        assert_eq!(relative_error(1.0, 0.0).unwrap_err(), SelectError::NonPositiveTruth);
    }

    fn unit(id: &str, truth: f64, est: MomentValue) -> UnitEval {
        UnitEval { id: id.into(), true_mean: truth, est_mean: est, est_variance: est }
    }

    #[test]
    fn aggregate_bias_and_rmsre() {
        let units = vec![
            unit("a", 1.0, Finite(1.05)),
            unit("b", 1.0, Finite(0.95)),
        ];
        let r = aggregate(&units).unwrap();
        assert!(r.relative_bias.unwrap().abs() < 1e-12);
        assert!((r.rmsre.unwrap() - 0.05).abs() < 1e-12);
        assert_eq!(r.undefined_mean_share, 0.0);
    }

    #[test]
    fn aggregate_three_point_example() {
        let units = vec![
            unit("a", 1.0, Finite(1.03)),
            unit("b", 1.0, Finite(1.04)),
            unit("c", 1.0, Finite(0.99)),
        ];
        let r = aggregate(&units).unwrap();
        assert!((r.relative_bias.unwrap() - 0.02).abs() < 1e-12);
        let expect = ((0.03f64.powi(2) + 0.04f64.powi(2) + 0.01f64.powi(2)) / 3.0).sqrt();
        assert!((r.rmsre.unwrap() - expect).abs() < 1e-12);
        assert!(r.rmsre.unwrap() >= r.relative_bias.unwrap().abs());
    }

    #[test]
    fn aggregate_all_undefined() {
        let units = vec![
            unit("a", 1.0, MomentValue::Indeterminate),
            unit("b", 1.0, PlusInfinity),
        ];
        let r = aggregate(&units).unwrap();
        assert_eq!(r.undefined_mean_share, 1.0);
        assert!(r.relative_bias.is_none() && r.rmsre.is_none());
    }

    #[test]
    fn aggregate_rejects_empty() {
        assert_eq!(aggregate(&[]).unwrap_err(), SelectError::EmptyInput);
    }

    #[test]
    fn aggregate_order_invariant() {
        let mut units = vec![
            unit("a", 1.0, Finite(1.2)),
            unit("b", 2.0, Finite(1.5)),
            unit("c", 3.0, Finite(3.3)),
        ];
        let r1 = aggregate(&units).unwrap();
        units.reverse();
        let r2 = aggregate(&units).unwrap();
        let db = (r1.relative_bias.unwrap() - r2.relative_bias.unwrap()).abs();
        let dr = (r1.rmsre.unwrap() - r2.rmsre.unwrap()).abs();
        assert!(db < 1e-15 && dr < 1e-15);
    }
}
