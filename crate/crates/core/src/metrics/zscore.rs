//! Citation normalization by publication-year cohort.
//!
//! Citation counts are heavily right-skewed, so each count is mapped to
//! `z = (ln(1+c) - mu_t) / sigma_t` where `mu_t` and `sigma_t` are the
//! mean and population standard deviation of `ln(1+c)` over the year's
//! cohort. Within every cohort the scores then have mean 0 and unit
//! population variance, making them comparable across years.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::YearWindow;

/// Threshold below which a cohort's log-citation scale is treated as
/// degenerate (all citation counts equal).
const DEGENERATE_SIGMA: f64 = 1e-9;

/// Location and scale of one publication-year cohort.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortStats {
    pub year: i32,
    /// Mean of ln(1+c).
    pub mean_log: f64,
    /// Population standard deviation of ln(1+c).
    pub sd_log: f64,
    pub n: usize,
}

/// Result of citation normalization over a corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CitationNormalization {
    /// z score per article, aligned with `corpus.articles` order.
    pub z: Vec<f64>,
    /// Cohort statistics sorted by year, one entry per year present.
    pub cohorts: Vec<CohortStats>,
    /// Unweighted mean of yearly scales over the analysis window.
    pub sigma_mean: f64,
    /// Years whose cohorts had no citation-scale variation; their
    /// articles all received z = 0.
    pub degenerate_years: Vec<i32>,
}

impl CitationNormalization {
    pub fn cohort(&self, year: i32) -> Option<&CohortStats> {
        self.cohorts.iter().find(|c| c.year == year)
    }
}

/// Compute per-article z scores, per-year cohort statistics, and the
/// window-averaged scale.
pub fn normalize_citations(corpus: &Corpus, window: YearWindow) -> Result<CitationNormalization> {
    if corpus.articles.is_empty() {
        return Err(Error::Input("cannot normalize citations of an empty corpus".into()));
    }
    let mut by_year: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (idx, article) in corpus.articles.iter().enumerate() {
        by_year.entry(article.year).or_default().push(idx);
    }

    let mut z = vec![0.0; corpus.articles.len()];
    let mut cohorts = Vec::with_capacity(by_year.len());
    let mut degenerate_years = Vec::new();
    for (&year, indices) in &by_year {
        let logs: Vec<f64> =
            indices.iter().map(|&i| f64::from(corpus.articles[i].citations).ln_1p()).collect();
        let n = logs.len() as f64;
        let mean = logs.iter().sum::<f64>() / n;
        let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        if sd < DEGENERATE_SIGMA {
            degenerate_years.push(year);
            // z stays 0 for the whole cohort
        } else {
            for (&i, &l) in indices.iter().zip(logs.iter()) {
                z[i] = (l - mean) / sd;
            }
        }
        cohorts.push(CohortStats { year, mean_log: mean, sd_log: sd, n: indices.len() });
    }

    let window_sds: Vec<f64> = cohorts
        .iter()
        .filter(|c| window.contains(c.year))
        .map(|c| c.sd_log)
        .collect();
    let sigma_mean = if window_sds.is_empty() {
        0.0
    } else {
        window_sds.iter().sum::<f64>() / window_sds.len() as f64
    };

    Ok(CitationNormalization { z, cohorts, sigma_mean, degenerate_years })
}

/// Mean normalized citation impact per journal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JournalImpact {
    pub means: BTreeMap<String, f64>,
}

impl JournalImpact {
    /// Mean z for a journal. Unknown journals fall back to 0 (the global
    /// cohort mean) with the imputation flag set.
    pub fn get(&self, journal_id: &str) -> (f64, bool) {
        match self.means.get(journal_id) {
            Some(&m) => (m, false),
            None => (0.0, true),
        }
    }
}

/// Average the per-article z scores within each journal.
pub fn journal_mean_impact(corpus: &Corpus, norm: &CitationNormalization) -> JournalImpact {
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for (article, &z) in corpus.articles.iter().zip(norm.z.iter()) {
        let entry = sums.entry(article.journal_id.clone()).or_insert((0.0, 0));
        entry.0 += z;
        entry.1 += 1;
    }
    let means = sums.into_iter().map(|(j, (sum, n))| (j, sum / n as f64)).collect();
    JournalImpact { means }
}
