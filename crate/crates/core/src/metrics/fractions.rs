//! Yearly fractions of articles featuring a given number of distinct
//! categories, split by citation-impact sign.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::Result;
use crate::metrics::zscore::CitationNormalization;
use crate::Taxon;

/// Citation-impact side of a split. Articles sitting exactly at the
/// cohort mean (z = 0) count as above average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ZGroup {
    Above,
    Below,
}

impl ZGroup {
    pub fn of(z: f64) -> Self {
        if z >= 0.0 {
            ZGroup::Above
        } else {
            ZGroup::Below
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ZGroup::Above => "above",
            ZGroup::Below => "below",
        }
    }
}

/// Fraction of a (year, impact-group) cell's articles that feature
/// `n_categories` distinct categories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionRow {
    pub year: i32,
    pub group: ZGroup,
    pub n_categories: usize,
    pub fraction: f64,
    /// Articles in the (year, group) cell.
    pub cell_size: usize,
}

/// Per year and impact group, the distribution of the number of distinct
/// categories per article. Fractions sum to 1 within each (year, group)
/// cell; rows cover every category count 1..=dim. Articles without any
/// count in the chosen taxonomy are skipped.
pub fn category_count_fractions(
    corpus: &Corpus,
    taxon: Taxon,
    norm: &CitationNormalization,
) -> Result<Vec<FractionRow>> {
    let dim = taxon.dim();
    let mut cells: BTreeMap<(i32, ZGroup), Vec<usize>> = BTreeMap::new();
    for (article, &z) in corpus.articles.iter().zip(norm.z.iter()) {
        let n_cat = match taxon {
            Taxon::Sa => article.n_sa(),
            Taxon::Cip => article.n_cip(),
        };
        if n_cat == 0 {
            continue;
        }
        let counts = cells
            .entry((article.year, ZGroup::of(z)))
            .or_insert_with(|| vec![0; dim + 1]);
        counts[n_cat] += 1;
    }

    let mut rows = Vec::new();
    for ((year, group), counts) in cells {
        let total: usize = counts.iter().sum();
        for n_categories in 1..=dim {
            rows.push(FractionRow {
                year,
                group,
                n_categories,
                fraction: counts[n_categories] as f64 / total as f64,
                cell_size: total,
            });
        }
    }
    Ok(rows)
}
