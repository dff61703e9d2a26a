//! Co-occurrence matrices from category count vectors.
//!
//! The per-article matrix is the upper-triangular part (diagonal
//! included) of the outer product of the count vector with itself,
//! normalized to unit element sum. Off-diagonal mass is the article's
//! diversity score `f_D = 1 - trace`, which lives in
//! `[0, (d-1)/(d+1)]` for `d` categories. A visualization variant zeroes
//! the diagonal for multi-category articles so mono- and cross-category
//! frequencies can be read on separate scales. Aggregates are plain
//! element-wise sums, so a period total equals the number of articles
//! contributing to it.

use serde::{Deserialize, Serialize};

use crate::collapse::CollapseSpec;
use crate::error::{Error, Result};

/// Which per-article matrix an aggregate is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixKind {
    /// Normalized outer product, diagonal included.
    Full,
    /// Visualization variant: off-diagonal only for multi-category
    /// articles, single diagonal entry for mono-category articles.
    OffDiagonal,
}

/// Symmetric nonnegative weight matrix stored as its upper triangle
/// (diagonal included), row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceMatrix {
    dim: usize,
    weights: Vec<f64>,
    normalized: bool,
}

impl CooccurrenceMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, weights: vec![0.0; dim * (dim + 1) / 2], normalized: false }
    }

    /// Build from explicit upper-triangle weights (diagonal included),
    /// row-major, `dim * (dim + 1) / 2` values.
    pub fn from_upper(dim: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != dim * (dim + 1) / 2 {
            return Err(Error::Input(format!(
                "expected {} upper-triangle weights for dim {dim}, got {}",
                dim * (dim + 1) / 2,
                weights.len()
            )));
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::Input("co-occurrence weights must be finite and >= 0".into()));
        }
        Ok(Self { dim, weights, normalized: false })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.dim);
        i * self.dim - i * (i + 1) / 2 + j
    }

    /// Stored weight for the unordered pair `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.weights[self.offset(i, j)]
    }

    fn add(&mut self, i: usize, j: usize, w: f64) {
        let idx = self.offset(i, j);
        self.weights[idx] += w;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Sum of all stored elements.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Upper-triangle entries as `(i, j, weight)` with 0-based `i <= j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| (i..self.dim).map(move |j| (i, j, self.get(i, j))))
    }

    fn normalize(mut self) -> Self {
        let total = self.total();
        if total > 0.0 {
            for w in &mut self.weights {
                *w /= total;
            }
        }
        self.normalized = true;
        self
    }
}

fn outer_upper(vec: &[u32]) -> CooccurrenceMatrix {
    let dim = vec.len();
    let mut m = CooccurrenceMatrix::zeros(dim);
    for i in 0..dim {
        if vec[i] == 0 {
            continue;
        }
        for j in i..dim {
            if vec[j] == 0 {
                continue;
            }
            m.add(i, j, f64::from(vec[i]) * f64::from(vec[j]));
        }
    }
    m
}

fn collapse_input(vec: &[u32], collapse: Option<&CollapseSpec>) -> Result<Vec<u32>> {
    let vec = match collapse {
        Some(spec) => spec.apply(vec)?,
        None => vec.to_vec(),
    };
    if vec.iter().all(|&c| c == 0) {
        return Err(Error::Input("all-zero count vector".into()));
    }
    Ok(vec)
}

/// Per-article co-occurrence matrix and diversity score.
///
/// Returns the unit-sum upper-triangular outer product and
/// `f_D = 1 - trace`. An optional collapse merges categories into
/// supergroups before the outer product.
pub fn diversity(
    vec: &[u32],
    collapse: Option<&CollapseSpec>,
) -> Result<(CooccurrenceMatrix, f64)> {
    let vec = collapse_input(vec, collapse)?;
    let m = outer_upper(&vec).normalize();
    let f_d = 1.0 - m.trace();
    Ok((m, f_d))
}

/// Visualization matrix: for articles spanning two or more categories
/// the diagonal is zeroed before normalization; a mono-category article
/// keeps a single unit diagonal entry.
pub fn viz_matrix(vec: &[u32]) -> Result<CooccurrenceMatrix> {
    let vec = collapse_input(vec, None)?;
    let distinct = vec.iter().filter(|&&c| c > 0).count();
    let mut m = outer_upper(&vec);
    if distinct >= 2 {
        for i in 0..m.dim {
            let idx = m.offset(i, i);
            m.weights[idx] = 0.0;
        }
    }
    Ok(m.normalize())
}

/// Element-wise sum of per-article matrices over a subset. Each article
/// contributes unit mass, so the aggregate totals the subset size.
/// An empty subset yields a zero matrix and a warning flag.
pub fn aggregate_cooccurrence<'a, I>(
    vecs: I,
    dim: usize,
    kind: MatrixKind,
    collapse: Option<&CollapseSpec>,
) -> Result<(CooccurrenceMatrix, usize)>
where
    I: IntoIterator<Item = &'a [u32]>,
{
    let out_dim = collapse.map_or(dim, CollapseSpec::dim);
    let mut acc = CooccurrenceMatrix::zeros(out_dim);
    let mut n = 0usize;
    for vec in vecs {
        let collapsed = collapse_input(vec, collapse)?;
        let m = match kind {
            MatrixKind::Full => diversity(&collapsed, None)?.0,
            MatrixKind::OffDiagonal => viz_matrix(&collapsed)?,
        };
        for (idx, w) in m.weights.iter().enumerate() {
            acc.weights[idx] += w;
        }
        n += 1;
    }
    Ok((acc, n))
}

/// Volume-corrected percent change between two aggregate matrices.
/// Entries where both periods carry zero mass are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftMatrix {
    dim: usize,
    entries: Vec<Option<f64>>,
    /// Post/pre article-volume ratio used for the correction.
    pub theta: f64,
}

impl ShiftMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.entries[i * self.dim - i * (i + 1) / 2 + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Option<f64>)> + '_ {
        (0..self.dim).flat_map(move |i| (i..self.dim).map(move |j| (i, j, self.get(i, j))))
    }
}

/// Percent difference per element, `200 (post - theta pre) / (post + theta pre)`,
/// with `theta = n_post / n_pre` correcting for the difference in period
/// volume.
pub fn shift_matrix(
    pre: &CooccurrenceMatrix,
    post: &CooccurrenceMatrix,
    n_pre: usize,
    n_post: usize,
) -> Result<ShiftMatrix> {
    if pre.dim != post.dim {
        return Err(Error::Input(format!(
            "shift matrix dimensions differ: {} vs {}",
            pre.dim, post.dim
        )));
    }
    if n_pre == 0 {
        return Err(Error::Input("pre-period article count is zero".into()));
    }
    let theta = n_post as f64 / n_pre as f64;
    let entries = pre
        .weights
        .iter()
        .zip(post.weights.iter())
        .map(|(&a, &b)| {
            let scaled = theta * a;
            let denom = b + scaled;
            if denom == 0.0 {
                None
            } else {
                Some(200.0 * (b - scaled) / denom)
            }
        })
        .collect();
    Ok(ShiftMatrix { dim: pre.dim, entries, theta })
}
