//! Coefficient-to-premium conversion and the pre/post effect summary for
//! difference-in-differences fits.

use serde::Serialize;

use crate::econ::FitResult;
use crate::error::{Error, Result};

/// Percent change in citations implied by a citation-model coefficient:
/// `100 * sigma_bar * gamma`, where `sigma_bar` is the mean yearly scale
/// of the log-citation distribution.
pub fn premium(gamma: f64, sigma_bar: f64) -> Result<f64> {
    if !(sigma_bar > 0.0) {
        return Err(Error::Input(format!("sigma_bar must be positive, got {sigma_bar}")));
    }
    Ok(100.0 * sigma_bar * gamma)
}

/// Pre/post effect and premium summary for a DiD interaction.
#[derive(Debug, Clone, Serialize)]
pub struct DidReport {
    /// Effect for the pre period: the main coefficient.
    pub pre_effect: f64,
    pub pre_se: f64,
    /// Effect for the post period: main plus interaction.
    pub post_effect: f64,
    /// Delta-method standard error of the sum.
    pub post_se: f64,
    pub sigma_bar: f64,
    pub pre_premium: f64,
    pub post_premium: f64,
}

/// Summarize a DiD fit: pre-period effect `gamma`, post-period effect
/// `gamma + delta` with its delta-method standard error
/// (`var(gamma) + var(delta) + 2 cov`), both converted to citation
/// premiums at `sigma_bar`.
pub fn did_report(
    fit: &FitResult,
    x_name: &str,
    interaction_name: &str,
    sigma_bar: f64,
) -> Result<DidReport> {
    let gamma = fit
        .term(x_name)
        .ok_or_else(|| Error::UnknownCoefficient(x_name.into()))?;
    let delta = fit
        .term(interaction_name)
        .ok_or_else(|| Error::UnknownCoefficient(interaction_name.into()))?;
    let cov = fit
        .covariance_between(x_name, interaction_name)
        .expect("both terms present implies covariance entry");

    let pre_effect = gamma.estimate;
    let post_effect = gamma.estimate + delta.estimate;
    let post_var = gamma.std_err.powi(2) + delta.std_err.powi(2) + 2.0 * cov;
    Ok(DidReport {
        pre_effect,
        pre_se: gamma.std_err,
        post_effect,
        post_se: post_var.max(0.0).sqrt(),
        sigma_bar,
        pre_premium: premium(pre_effect, sigma_bar)?,
        post_premium: premium(post_effect, sigma_bar)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::{FitStats, ModelKind, Term};
    use nalgebra::DMatrix;

    fn toy_fit(gamma: f64, delta: f64, cov: [[f64; 2]; 2]) -> FitResult {
        let covariance = DMatrix::from_row_slice(2, 2, &[
            cov[0][0], cov[0][1], //
            cov[1][0], cov[1][1],
        ]);
        let term = |name: &str, estimate: f64, var: f64| Term {
            name: name.into(),
            estimate,
            std_err: var.sqrt(),
            statistic: 0.0,
            p_value: 1.0,
            odds_ratio: None,
        };
        FitResult {
            model: ModelKind::FixedEffectsOls,
            terms: vec![term("i_x", gamma, cov[0][0]), term("i_x_post", delta, cov[1][1])],
            covariance,
            n_obs: 0,
            n_clusters: 0,
            stats: FitStats::default(),
            dropped: Vec::new(),
        }
    }

    #[test]
    fn premium_arithmetic() {
        assert!((premium(0.13, 1.24).unwrap() - 16.12).abs() < 1e-12);
        assert!((premium(0.07, 1.24).unwrap() - 8.68).abs() < 1e-12);
        assert_eq!(premium(0.0, 1.24).unwrap(), 0.0);
        assert!(premium(0.1, 0.0).is_err());
    }

    #[test]
    fn pre_and_post_effects_combine() {
        let fit = toy_fit(0.15, -0.09, [[0.0, 0.0], [0.0, 0.0]]);
        let report = did_report(&fit, "i_x", "i_x_post", 1.24).unwrap();
        assert!((report.pre_effect - 0.15).abs() < 1e-15);
        assert!((report.post_effect - 0.06).abs() < 1e-15);
        assert!((report.pre_premium - 18.6).abs() < 1e-12);
        assert!((report.post_premium - 7.44).abs() < 1e-12);
    }

    #[test]
    fn zero_interaction_means_identical_premiums() {
        let fit = toy_fit(0.1, 0.0, [[1e-4, 0.0], [0.0, 0.0]]);
        let report = did_report(&fit, "i_x", "i_x_post", 1.24).unwrap();
        assert_eq!(report.pre_premium, report.post_premium);
    }

    #[test]
    fn post_se_follows_the_delta_method() {
        // var(g+d) = var(g) + var(d) + 2 cov = 0.04 + 0.09 + 2*0.012
        let fit = toy_fit(0.2, -0.05, [[0.04, 0.012], [0.012, 0.09]]);
        let report = did_report(&fit, "i_x", "i_x_post", 1.0).unwrap();
        let expect = (0.04f64 + 0.09 + 0.024).sqrt();
        assert!((report.post_se - expect).abs() < 1e-12);
    }

    #[test]
    fn unknown_coefficient_is_an_input_error() {
        let fit = toy_fit(0.1, 0.0, [[0.0, 0.0], [0.0, 0.0]]);
        assert!(matches!(
            did_report(&fit, "i_x", "missing", 1.24),
            Err(Error::UnknownCoefficient(_))
        ));
    }
}
