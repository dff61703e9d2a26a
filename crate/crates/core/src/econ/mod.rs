//! Regression models: logit propensity for cross-domain activity and
//! author fixed-effects citation models, both with cluster-robust
//! sandwich covariance, plus coefficient-to-premium conversion.

mod design;
mod effects;
mod linalg;
mod logit;
mod ols;

pub use design::{
    build_fe_design, build_logit_design, DesignMatrix, DroppedColumn, RowId, XDefinition, XTaxon,
};
pub use effects::{did_report, premium, DidReport};
pub use logit::fit_logit;
pub use ols::fit_fe_ols;

use nalgebra::DMatrix;
use serde::Serialize;

/// Which estimator produced a [`FitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    Logit,
    FixedEffectsOls,
}

/// One estimated coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct Term {
    pub name: String,
    pub estimate: f64,
    /// Cluster-robust standard error.
    pub std_err: f64,
    /// z statistic for logit, t statistic for fixed-effects OLS.
    pub statistic: f64,
    pub p_value: f64,
    /// exp(estimate), reported for logit models only.
    pub odds_ratio: Option<f64>,
}

/// Summary statistics for one fitted model.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FitStats {
    /// McFadden pseudo R-squared (logit).
    pub pseudo_r_squared: Option<f64>,
    pub log_likelihood: Option<f64>,
    /// Within R-squared (fixed-effects OLS).
    pub r_squared_within: Option<f64>,
    /// Adjusted for regressors and absorbed group means.
    pub adj_r_squared: Option<f64>,
    pub f_statistic: Option<f64>,
    /// Number of absorbed researcher profiles (fixed-effects OLS).
    pub n_profiles: Option<usize>,
}

/// Estimates, clustered covariance, and fit statistics for one
/// regression specification.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: ModelKind,
    pub terms: Vec<Term>,
    /// Cluster-robust covariance over `terms`, in term order.
    pub covariance: DMatrix<f64>,
    pub n_obs: usize,
    pub n_clusters: usize,
    pub stats: FitStats,
    /// Columns removed before or during the fit, with reasons.
    pub dropped: Vec<DroppedColumn>,
}

impl FitResult {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }

    /// Covariance between two named coefficients.
    pub fn covariance_between(&self, a: &str, b: &str) -> Option<f64> {
        let ia = self.terms.iter().position(|t| t.name == a)?;
        let ib = self.terms.iter().position(|t| t.name == b)?;
        Some(self.covariance[(ia, ib)])
    }
}
