//! Diversity time series with secular-growth deflation, and the
//! count-shuffling randomization baseline.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::collapse::CollapseSpec;
use crate::corpus::Corpus;
use crate::error::Result;
use crate::metrics::cooccur::diversity;
use crate::Taxon;

/// One year of a diversity series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityPoint {
    pub year: i32,
    pub n: usize,
    /// Mean per-article diversity for the year.
    pub raw_mean: f64,
    /// Inverse coefficient of variation of categories-per-article
    /// (`None` when the year has no count variation).
    pub inv_cv: Option<f64>,
    /// Deflator applied to the raw mean; 1 when the year's inverse CV is
    /// undefined.
    pub deflator: f64,
    pub deflated: f64,
}

/// A per-region (or pooled) diversity series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversitySeries {
    /// Region 1..=4, or `None` for the pooled series.
    pub region: Option<u8>,
    pub points: Vec<DiversityPoint>,
    /// Articles skipped because their (collapsed) vector carried no
    /// counts.
    pub skipped: usize,
}

/// Mean article diversity by year, per region and pooled, optionally
/// deflated by the growth in categories-per-article.
///
/// The deflator for year `t` is `mean(inv_cv) / inv_cv(t)` where
/// `inv_cv(t)` is the mean over articles of the number of distinct
/// categories divided by its population standard deviation, and the
/// outer mean runs over the series' years with a defined inverse CV.
/// Years without count variation get a unit deflator. Years without
/// articles are gaps, not errors.
pub fn diversity_timeseries(
    corpus: &Corpus,
    taxon: Taxon,
    collapse: Option<&CollapseSpec>,
    deflate: bool,
) -> Result<Vec<DiversitySeries>> {
    let mut series = Vec::with_capacity(5);
    for region in [None, Some(1u8), Some(2), Some(3), Some(4)] {
        series.push(single_series(corpus, taxon, collapse, deflate, region)?);
    }
    Ok(series)
}

fn single_series(
    corpus: &Corpus,
    taxon: Taxon,
    collapse: Option<&CollapseSpec>,
    deflate: bool,
    region: Option<u8>,
) -> Result<DiversitySeries> {
    // (sum f_D, n, category counts) per year
    let mut years: BTreeMap<i32, (f64, usize, Vec<f64>)> = BTreeMap::new();
    let mut skipped = 0usize;
    for article in &corpus.articles {
        if let Some(r) = region {
            if article.modal_region() != r {
                continue;
            }
        }
        let vec: &[u32] = match taxon {
            Taxon::Sa => &article.sa_vec,
            Taxon::Cip => &article.cip_vec,
        };
        let collapsed = match collapse {
            Some(spec) => spec.apply(vec)?,
            None => vec.to_vec(),
        };
        if collapsed.iter().all(|&c| c == 0) {
            skipped += 1;
            continue;
        }
        let (_, f_d) = diversity(&collapsed, None)?;
        let n_cat = collapsed.iter().filter(|&&c| c > 0).count() as f64;
        let entry = years.entry(article.year).or_insert((0.0, 0, Vec::new()));
        entry.0 += f_d;
        entry.1 += 1;
        entry.2.push(n_cat);
    }

    let mut points: Vec<DiversityPoint> = years
        .into_iter()
        .map(|(year, (sum, n, cats))| {
            let mean_cat = cats.iter().sum::<f64>() / n as f64;
            let var = cats.iter().map(|c| (c - mean_cat).powi(2)).sum::<f64>() / n as f64;
            let inv_cv = if var > 0.0 { Some(mean_cat / var.sqrt()) } else { None };
            DiversityPoint {
                year,
                n,
                raw_mean: sum / n as f64,
                inv_cv,
                deflator: 1.0,
                deflated: sum / n as f64,
            }
        })
        .collect();

    if deflate {
        let defined: Vec<f64> = points.iter().filter_map(|p| p.inv_cv).collect();
        if !defined.is_empty() {
            let mean_inv_cv = defined.iter().sum::<f64>() / defined.len() as f64;
            for p in &mut points {
                if let Some(inv_cv) = p.inv_cv {
                    p.deflator = mean_inv_cv / inv_cv;
                    p.deflated = p.raw_mean * p.deflator;
                }
            }
        }
    }

    Ok(DiversitySeries { region, points, skipped })
}

/// Randomization baseline: permute each article's SA and CIP counts
/// uniformly at random across their category slots. Totals per vector
/// are preserved; the result is deterministic for a given seed.
///
/// The shuffled corpus is an in-memory analysis object: its SA vectors
/// no longer derive from the MeSH branch letters.
pub fn shuffle_baseline(corpus: &Corpus, seed: u64) -> Corpus {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut shuffled = corpus.clone();
    for article in &mut shuffled.articles {
        article.sa_vec.shuffle(&mut rng);
        article.cip_vec.shuffle(&mut rng);
    }
    shuffled
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ArticleRecord, AuthorProfile, TaxonomyMaps, CIP_DIM, REGION_DIM, SA_DIM};
    use approx::assert_abs_diff_eq;

    fn article(id: &str, year: i32, sa: [u32; SA_DIM], region: usize) -> ArticleRecord {
        ArticleRecord {
            article_id: id.into(),
            year,
            citations: 0,
            journal_id: "j".into(),
            author_ids: vec!["a1".into()],
            mesh_branches: vec![],
            sa_vec: sa,
            cip_vec: {
                let mut v = [0; CIP_DIM];
                v[0] = 1;
                v
            },
            region_vec: {
                let mut v = [0; REGION_DIM];
                v[region - 1] = 1;
                v
            },
            mesh_major_count: sa.iter().sum(),
        }
    }

    fn corpus(articles: Vec<ArticleRecord>) -> Corpus {
        let taxonomy = TaxonomyMaps::new(
            TaxonomyMaps::default_mesh_map(),
            [("NEURO".to_string(), 1)].into_iter().collect(),
            [("United States".to_string(), 1)].into_iter().collect(),
        )
        .unwrap();
        let mut authors = std::collections::BTreeMap::new();
        authors.insert(
            "a1".to_string(),
            AuthorProfile { author_id: "a1".into(), cip_cluster: 1, first_pub_year: 1950, region: 1 },
        );
        Corpus { articles, authors, taxonomy }
    }

    #[test]
    fn constant_inverse_cv_leaves_series_undeflated() {
        // identical composition every year: the deflator is exactly 1
        let mut articles = Vec::new();
        for year in 2000..2003 {
            articles.push(article(&format!("m{year}"), year, [2, 0, 0, 0, 0, 0], 1));
            articles.push(article(&format!("x{year}"), year, [1, 1, 0, 0, 0, 0], 1));
        }
        let series = diversity_timeseries(&corpus(articles), Taxon::Sa, None, true).unwrap();
        let pooled = &series[0];
        for p in &pooled.points {
            assert_abs_diff_eq!(p.deflator, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.deflated, p.raw_mean, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_year_series_has_unit_deflator() {
        let articles = vec![
            article("m", 2000, [2, 0, 0, 0, 0, 0], 1),
            article("x", 2000, [1, 1, 0, 0, 0, 0], 1),
        ];
        let series = diversity_timeseries(&corpus(articles), Taxon::Sa, None, true).unwrap();
        assert_abs_diff_eq!(series[0].points[0].deflator, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_year_defaults_to_raw_mean() {
        let mut articles = vec![
            // 2000: every article has exactly two categories, sd = 0
            article("a", 2000, [1, 1, 0, 0, 0, 0], 1),
            article("b", 2000, [0, 2, 2, 0, 0, 0], 1),
        ];
        // 2001 has variation so the deflator machinery engages
        articles.push(article("c", 2001, [1, 0, 0, 0, 0, 0], 1));
        articles.push(article("d", 2001, [1, 1, 1, 0, 0, 0], 1));
        let series = diversity_timeseries(&corpus(articles), Taxon::Sa, None, true).unwrap();
        let p2000 = &series[0].points[0];
        assert_eq!(p2000.inv_cv, None);
        assert_abs_diff_eq!(p2000.deflator, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn regions_and_gaps_are_respected() {
        let articles = vec![
            article("a", 2000, [1, 1, 0, 0, 0, 0], 1),
            article("b", 2002, [1, 0, 0, 0, 0, 0], 2),
        ];
        let series = diversity_timeseries(&corpus(articles), Taxon::Sa, None, false).unwrap();
        let na = series.iter().find(|s| s.region == Some(1)).unwrap();
        assert_eq!(na.points.len(), 1);
        assert_eq!(na.points[0].year, 2000);
        let eu = series.iter().find(|s| s.region == Some(2)).unwrap();
        assert_eq!(eu.points.len(), 1);
        assert_eq!(eu.points[0].year, 2002);
        // pooled series has a gap at 2001
        assert_eq!(series[0].points.iter().map(|p| p.year).collect::<Vec<_>>(), vec![2000, 2002]);
    }

    #[test]
    fn shuffle_preserves_totals_and_is_seeded() {
        let articles = vec![
            article("a", 2000, [5, 0, 0, 0, 0, 0], 1),
            article("b", 2000, [1, 2, 3, 0, 0, 0], 1),
        ];
        let c = corpus(articles);
        let s1 = shuffle_baseline(&c, 42);
        let s2 = shuffle_baseline(&c, 42);
        let s3 = shuffle_baseline(&c, 43);
        for (orig, shuf) in c.articles.iter().zip(s1.articles.iter()) {
            assert_eq!(
                orig.sa_vec.iter().sum::<u32>(),
                shuf.sa_vec.iter().sum::<u32>()
            );
            let mut a = orig.sa_vec;
            let mut b = shuf.sa_vec;
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "shuffle must permute, not alter, the counts");
        }
        assert_eq!(
            s1.articles.iter().map(|a| a.sa_vec).collect::<Vec<_>>(),
            s2.articles.iter().map(|a| a.sa_vec).collect::<Vec<_>>()
        );
        // a different seed rearranges something across a few articles
        let moved = s1
            .articles
            .iter()
            .zip(s3.articles.iter())
            .any(|(x, y)| x.sa_vec != y.sa_vec || x.cip_vec != y.cip_vec);
        assert!(moved);
    }
}
