//! Shared numeric kernels for the regression fitters: rank screening of
//! design columns and the clustered sandwich meat.

use nalgebra::{DMatrix, DVector};

/// Relative pivot threshold below which a column counts as linearly
/// dependent on the columns kept before it.
const RANK_TOL: f64 = 1e-10;

/// Split column indices into an independent set and the columns that are
/// (numerically) linear combinations of earlier ones.
///
/// Works on the Gram matrix with an incrementally extended Cholesky
/// factor, so columns are screened in their given order and the first
/// occurrence of a span wins.
pub fn independent_columns(x: &DMatrix<f64>) -> (Vec<usize>, Vec<usize>) {
    let k = x.ncols();
    let gram = x.transpose() * x;
    let mut kept: Vec<usize> = Vec::with_capacity(k);
    // lower-triangular factor of the kept submatrix, row-major by kept order
    let mut factor: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut dropped = Vec::new();

    for j in 0..k {
        let gjj = gram[(j, j)];
        if gjj <= 0.0 || !gjj.is_finite() {
            dropped.push(j);
            continue;
        }
        // forward-solve L w = gram[kept, j]
        let mut w = Vec::with_capacity(kept.len());
        for (row, &ki) in kept.iter().enumerate() {
            let mut s = gram[(ki, j)];
            for (col, wc) in w.iter().enumerate().take(row) {
                s -= factor[row][col] * wc;
            }
            w.push(s / factor[row][row]);
        }
        let resid = gjj - w.iter().map(|v| v * v).sum::<f64>();
        if resid <= RANK_TOL * gjj {
            dropped.push(j);
            continue;
        }
        let mut row = w;
        row.push(resid.sqrt());
        factor.push(row);
        kept.push(j);
    }
    (kept, dropped)
}

/// Select a subset of columns into a new matrix.
pub fn select_columns(x: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), cols.len());
    for (new_j, &j) in cols.iter().enumerate() {
        out.set_column(new_j, &x.column(j));
    }
    out
}

/// Clustered sandwich meat: sum over clusters of the outer product of
/// within-cluster score sums, with scores `u_i * x_i`.
pub fn cluster_meat(
    x: &DMatrix<f64>,
    u: &DVector<f64>,
    cluster_ids: &[usize],
    n_clusters: usize,
) -> DMatrix<f64> {
    let k = x.ncols();
    let mut scores = DMatrix::<f64>::zeros(n_clusters, k);
    for (i, &g) in cluster_ids.iter().enumerate() {
        let ui = u[i];
        for j in 0..k {
            scores[(g, j)] += ui * x[(i, j)];
        }
    }
    let mut meat = DMatrix::<f64>::zeros(k, k);
    for g in 0..n_clusters {
        let s = scores.row(g);
        for a in 0..k {
            for b in a..k {
                let v = s[a] * s[b];
                meat[(a, b)] += v;
                if a != b {
                    meat[(b, a)] += v;
                }
            }
        }
    }
    meat
}

/// Small-sample factor `G/(G-1) * (N-1)/(N-K)` for clustered covariance.
pub fn cr1(n_clusters: usize, n_obs: usize, n_params: usize) -> f64 {
    let g = n_clusters as f64;
    let n = n_obs as f64;
    let k = n_params as f64;
    if n_clusters > 1 && n_obs > n_params {
        (g / (g - 1.0)) * ((n - 1.0) / (n - k))
    } else {
        1.0
    }
}
