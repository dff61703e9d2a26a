//! Logistic maximum likelihood via iteratively reweighted least squares
//! with cluster-robust covariance.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::econ::design::{DesignMatrix, DroppedColumn};
use crate::econ::linalg::{cluster_meat, cr1, independent_columns, select_columns};
use crate::econ::{FitResult, FitStats, ModelKind, Term};
use crate::error::{Error, Result};

/// Convergence threshold on the maximum absolute coefficient change.
const COEF_TOL: f64 = 1e-8;
const MAX_ITER: usize = 100;
/// Any coefficient beyond this magnitude during iteration indicates
/// complete or quasi-separation.
const SEPARATION_BOUND: f64 = 30.0;

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + exp(eta)) without overflow.
fn ln_1p_exp(eta: f64) -> f64 {
    if eta > 30.0 { eta } else { eta.exp().ln_1p() }
}

/// Fit a logistic regression by IRLS.
///
/// Linearly dependent columns are removed up front (logged on the
/// result). Divergence past the separation bound or failure to converge
/// in 100 iterations reports a separation error. The covariance is the
/// clustered sandwich over the design's cluster ids with the CR1
/// small-sample factor; odds ratios are exp(estimate).
pub fn fit_logit(design: &DesignMatrix) -> Result<FitResult> {
    let y = &design.outcome;
    let n = y.len();
    if n == 0 {
        return Err(Error::EmptyDesign("logit fit on an empty design".into()));
    }
    if y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::Input("logit outcome must be 0/1".into()));
    }
    let ones = y.iter().filter(|&&v| v == 1.0).count();
    if ones == 0 || ones == n {
        return Err(Error::Input("logit outcome needs both classes present".into()));
    }

    let (kept, dependent) = independent_columns(&design.x);
    let mut dropped = design.dropped.clone();
    for &j in &dependent {
        dropped.push(DroppedColumn {
            name: design.columns[j].clone(),
            reason: "linearly dependent on earlier columns".into(),
        });
    }
    let x = select_columns(&design.x, &kept);
    let names: Vec<String> = kept.iter().map(|&j| design.columns[j].clone()).collect();
    let k = x.ncols();

    let mut beta = DVector::<f64>::zeros(k);
    let mut converged = false;
    let mut hessian = DMatrix::<f64>::zeros(k, k);
    let mut p = DVector::<f64>::zeros(n);
    for _ in 0..MAX_ITER {
        let eta = &x * &beta;
        for i in 0..n {
            p[i] = sigmoid(eta[i]);
        }
        // X' W X with W = diag(p(1-p))
        hessian.fill(0.0);
        for i in 0..n {
            let w = p[i] * (1.0 - p[i]);
            if w == 0.0 {
                continue;
            }
            for a in 0..k {
                let xa = x[(i, a)] * w;
                for b in a..k {
                    hessian[(a, b)] += xa * x[(i, b)];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                hessian[(a, b)] = hessian[(b, a)];
            }
        }
        let score = x.transpose() * (y - &p);
        let chol = hessian.clone().cholesky().ok_or_else(|| {
            Error::Collinear(singular_candidates(&hessian, &names))
        })?;
        let step = chol.solve(&score);
        beta += &step;
        if beta.iter().any(|b| b.abs() > SEPARATION_BOUND) {
            return Err(Error::Separation(format!(
                "coefficient magnitude exceeded {SEPARATION_BOUND} during iteration"
            )));
        }
        if step.amax() < COEF_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Separation(format!("no convergence in {MAX_ITER} iterations")));
    }

    // refresh p and the hessian at the solution
    let eta = &x * &beta;
    for i in 0..n {
        p[i] = sigmoid(eta[i]);
    }
    let log_lik: f64 = (0..n).map(|i| y[i] * eta[i] - ln_1p_exp(eta[i])).sum();
    let p_bar = ones as f64 / n as f64;
    let null_log_lik = n as f64 * (p_bar * p_bar.ln() + (1.0 - p_bar) * (1.0 - p_bar).ln());
    let pseudo_r2 = 1.0 - log_lik / null_log_lik;

    let bread = hessian
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Collinear(singular_candidates(&hessian, &names)))?
        .inverse();
    let residual = y - &p;
    let meat = cluster_meat(&x, &residual, &design.cluster_ids, design.n_clusters);
    let factor = cr1(design.n_clusters, n, k);
    let covariance = (&bread * meat * &bread) * factor;

    let normal = Normal::standard();
    let terms = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let estimate = beta[j];
            let std_err = covariance[(j, j)].max(0.0).sqrt();
            let statistic = if std_err > 0.0 { estimate / std_err } else { f64::NAN };
            let p_value = if statistic.is_finite() {
                2.0 * (1.0 - normal.cdf(statistic.abs()))
            } else {
                f64::NAN
            };
            Term {
                name: name.clone(),
                estimate,
                std_err,
                statistic,
                p_value,
                odds_ratio: Some(estimate.exp()),
            }
        })
        .collect();

    Ok(FitResult {
        model: ModelKind::Logit,
        terms,
        covariance,
        n_obs: n,
        n_clusters: design.n_clusters,
        stats: FitStats {
            pseudo_r_squared: Some(pseudo_r2),
            log_likelihood: Some(log_lik),
            ..FitStats::default()
        },
        dropped,
    })
}

/// Name the columns most likely responsible for a singular cross-product:
/// those whose pivot would vanish in a Cholesky pass.
fn singular_candidates(m: &DMatrix<f64>, names: &[String]) -> Vec<String> {
    let k = m.ncols();
    let mut out = Vec::new();
    for j in 0..k {
        if m[(j, j)] <= 0.0 {
            out.push(names[j].clone());
        }
    }
    if out.is_empty() {
        out = names.to_vec();
    }
    out
}
