//! Fixed-effects OLS: the within estimator with cluster-robust
//! covariance.
//!
//! Outcome and covariates are demeaned inside each cluster group, which
//! absorbs one intercept per group, then ordinary least squares runs on
//! the transformed data. Columns that are constant within every group
//! vanish under the transform and are dropped with a log entry rather
//! than an error.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::econ::design::{DesignMatrix, DroppedColumn};
use crate::econ::linalg::{cluster_meat, cr1, independent_columns, select_columns};
use crate::econ::{FitResult, FitStats, ModelKind, Term};
use crate::error::{Error, Result};

/// Relative threshold under which a demeaned column counts as absorbed
/// by the fixed effects.
const ABSORBED_TOL: f64 = 1e-10;

/// Fit the within estimator on a design clustered by group (author).
///
/// The covariance is the clustered sandwich with the CR1 factor;
/// t statistics use `G - 1` degrees of freedom. The adjusted R-squared
/// and F statistic charge degrees of freedom for the absorbed group
/// means as well as the regressors.
pub fn fit_fe_ols(design: &DesignMatrix) -> Result<FitResult> {
    let n = design.n_obs();
    if n == 0 {
        return Err(Error::EmptyDesign("fixed-effects fit on an empty design".into()));
    }
    let g = design.n_clusters;

    // group means per cluster for outcome and every column
    let k_all = design.x.ncols();
    let mut count = vec![0usize; g];
    let mut y_mean = vec![0.0; g];
    let mut x_mean = vec![0.0; g * k_all];
    for i in 0..n {
        let c = design.cluster_ids[i];
        count[c] += 1;
        y_mean[c] += design.outcome[i];
        for j in 0..k_all {
            x_mean[c * k_all + j] += design.x[(i, j)];
        }
    }
    for c in 0..g {
        let m = count[c] as f64;
        y_mean[c] /= m;
        for j in 0..k_all {
            x_mean[c * k_all + j] /= m;
        }
    }

    let mut y_dm = design.outcome.clone();
    let mut x_dm = design.x.clone();
    for i in 0..n {
        let c = design.cluster_ids[i];
        y_dm[i] -= y_mean[c];
        for j in 0..k_all {
            x_dm[(i, j)] -= x_mean[c * k_all + j];
        }
    }

    // columns annihilated by the within transform
    let mut dropped = design.dropped.clone();
    let mut live: Vec<usize> = Vec::with_capacity(k_all);
    for j in 0..k_all {
        let demeaned_norm = x_dm.column(j).norm();
        let original_norm = design.x.column(j).norm();
        if demeaned_norm <= ABSORBED_TOL * (original_norm + 1.0) {
            dropped.push(DroppedColumn {
                name: design.columns[j].clone(),
                reason: "constant within every group (absorbed by fixed effects)".into(),
            });
        } else {
            live.push(j);
        }
    }
    if live.is_empty() {
        return Err(Error::EmptyDesign("every column is absorbed by the fixed effects".into()));
    }
    let x_live = select_columns(&x_dm, &live);
    let live_names: Vec<String> = live.iter().map(|&j| design.columns[j].clone()).collect();

    // then drop exact linear combinations among the demeaned columns
    let (kept, dependent) = independent_columns(&x_live);
    for &j in &dependent {
        dropped.push(DroppedColumn {
            name: live_names[j].clone(),
            reason: "linearly dependent on earlier columns".into(),
        });
    }
    let x = select_columns(&x_live, &kept);
    let names: Vec<String> = kept.iter().map(|&j| live_names[j].clone()).collect();
    let k = x.ncols();

    let xtx = x.transpose() * &x;
    let xty = x.transpose() * &y_dm;
    let chol = xtx
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Collinear(names.clone()))?;
    let beta = chol.solve(&xty);
    let bread = chol.inverse();

    let residuals = &y_dm - &x * &beta;
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let tss: f64 = y_dm.iter().map(|v| v * v).sum();
    let r2_within = if tss > 0.0 { 1.0 - rss / tss } else { 0.0 };
    let dof_model = n as f64 - g as f64 - k as f64;
    let adj_r2 = if dof_model > 0.0 {
        1.0 - (1.0 - r2_within) * (n as f64 - 1.0) / dof_model
    } else {
        f64::NAN
    };
    let f_stat = if dof_model > 0.0 && r2_within < 1.0 {
        (r2_within / k as f64) / ((1.0 - r2_within) / dof_model)
    } else {
        f64::NAN
    };

    let meat = cluster_meat(&x, &residuals, &design.cluster_ids, g);
    let factor = cr1(g, n, k);
    let covariance = (&bread * meat * &bread) * factor;

    let t_dof = (g.max(2) - 1) as f64;
    let t_dist = StudentsT::new(0.0, 1.0, t_dof).expect("valid dof");
    let terms = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let estimate = beta[j];
            let std_err = covariance[(j, j)].max(0.0).sqrt();
            let statistic = if std_err > 0.0 { estimate / std_err } else { f64::NAN };
            let p_value = if statistic.is_finite() {
                2.0 * (1.0 - t_dist.cdf(statistic.abs()))
            } else {
                f64::NAN
            };
            Term { name: name.clone(), estimate, std_err, statistic, p_value, odds_ratio: None }
        })
        .collect();

    Ok(FitResult {
        model: ModelKind::FixedEffectsOls,
        terms,
        covariance,
        n_obs: n,
        n_clusters: g,
        stats: FitStats {
            r_squared_within: Some(r2_within),
            adj_r_squared: Some(adj_r2),
            f_statistic: Some(f_stat),
            n_profiles: Some(g),
            ..FitStats::default()
        },
        dropped,
    })
}
