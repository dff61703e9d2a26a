//! Regression dataset construction.
//!
//! The logit design has one row per article and models the odds of
//! cross-domain activity; the fixed-effects design has one row per
//! qualifying (author, article) pair and models normalized citation
//! impact. Both exclude solo-authored articles and articles with a
//! single mapped major term, since those are mono-domain by
//! construction in at least one taxonomy.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::classify::{classify_config, classify_joint, ConfigSpec, XmLabel};
use crate::corpus::{ArticleRecord, Corpus, CIP_DIM, SA_DIM};
use crate::error::{Error, Result};
use crate::metrics::{CitationNormalization, JournalImpact};
use crate::{Taxon, YearWindow};

/// Which cross-domain indicator a model is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum XTaxon {
    Sa,
    Cip,
    /// Cross-domain in both taxonomies; mixed articles are excluded so
    /// the baseline is mono-domain in both.
    Joint,
}

impl XTaxon {
    pub fn name(self) -> &'static str {
        match self {
            XTaxon::Sa => "sa",
            XTaxon::Cip => "cip",
            XTaxon::Joint => "joint",
        }
    }
}

/// A cross-domain definition: the target taxonomy plus the
/// configuration pair that classifies each side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XDefinition {
    pub taxon: XTaxon,
    pub sa: ConfigSpec,
    pub cip: ConfigSpec,
}

impl XDefinition {
    pub fn new(taxon: XTaxon, sa: ConfigSpec, cip: ConfigSpec) -> Result<Self> {
        if sa.arity != Taxon::Sa || cip.arity != Taxon::Cip {
            return Err(Error::Input("configuration arities do not match their slots".into()));
        }
        sa.validate()?;
        cip.validate()?;
        Ok(Self { taxon, sa, cip })
    }

    /// Built-in configuration pair by name: broad, neighboring, distant.
    pub fn from_name(config: &str, taxon: XTaxon) -> Result<Self> {
        let sa = ConfigSpec::builtin(config, Taxon::Sa)
            .ok_or_else(|| Error::Input(format!("unknown configuration {config:?}")))?;
        let cip = ConfigSpec::builtin(config, Taxon::Cip).expect("same names for both arities");
        Self::new(taxon, sa, cip)
    }

    /// Classify one article under this definition. `None` means the
    /// article cannot be classified (no mapped SA terms).
    pub fn label(&self, article: &ArticleRecord) -> Result<Option<XmLabel>> {
        let sa_label = if article.has_sa() {
            Some(classify_config(&article.sa_vec, &self.sa)?)
        } else {
            None
        };
        let cip_label = classify_config(&article.cip_vec, &self.cip)?;
        Ok(match self.taxon {
            XTaxon::Sa => sa_label,
            XTaxon::Cip => Some(cip_label),
            XTaxon::Joint => sa_label.map(|sa| classify_joint(sa, cip_label)),
        })
    }

    /// Indicator column name, e.g. `i_x_joint`.
    pub fn indicator_name(&self) -> String {
        format!("i_x_{}", self.taxon.name())
    }
}

/// Provenance of one design row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowId {
    pub article_id: String,
    /// Set when rows are (author, article) pairs.
    pub author_id: Option<String>,
}

/// A column removed from a design or fit, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DroppedColumn {
    pub name: String,
    pub reason: String,
}

/// Outcome, predictors, and clustering for one regression.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub outcome: DVector<f64>,
    pub x: DMatrix<f64>,
    pub columns: Vec<String>,
    /// Dense 0-based cluster index per row.
    pub cluster_ids: Vec<usize>,
    pub n_clusters: usize,
    pub rows: Vec<RowId>,
    pub dropped: Vec<DroppedColumn>,
}

impl DesignMatrix {
    pub fn n_obs(&self) -> usize {
        self.outcome.len()
    }

    fn from_rows(
        outcome: Vec<f64>,
        rows_data: Vec<Vec<f64>>,
        columns: Vec<String>,
        cluster_keys: Vec<String>,
        rows: Vec<RowId>,
    ) -> Self {
        let n = outcome.len();
        let k = columns.len();
        let mut flat = Vec::with_capacity(n * k);
        for row in &rows_data {
            debug_assert_eq!(row.len(), k);
            flat.extend_from_slice(row);
        }
        let x = DMatrix::from_row_slice(n, k, &flat);

        let mut cluster_index: BTreeMap<&str, usize> = BTreeMap::new();
        for key in &cluster_keys {
            let next = cluster_index.len();
            cluster_index.entry(key.as_str()).or_insert(next);
        }
        let cluster_ids = cluster_keys.iter().map(|k| cluster_index[k.as_str()]).collect();
        let n_clusters = cluster_index.len();

        let mut design = Self {
            outcome: DVector::from_vec(outcome),
            x,
            columns,
            cluster_ids,
            n_clusters,
            rows,
            dropped: Vec::new(),
        };
        design.drop_constant_columns();
        design
    }

    /// Remove non-intercept columns without variation so no column is
    /// constant after processing.
    fn drop_constant_columns(&mut self) {
        let mut keep = Vec::new();
        for j in 0..self.x.ncols() {
            if self.columns[j] == "intercept" {
                keep.push(j);
                continue;
            }
            let col = self.x.column(j);
            let first = col[0];
            if col.iter().all(|&v| v == first) {
                self.dropped.push(DroppedColumn {
                    name: self.columns[j].clone(),
                    reason: "constant column".into(),
                });
            } else {
                keep.push(j);
            }
        }
        if keep.len() != self.x.ncols() {
            self.x = super::linalg::select_columns(&self.x, &keep);
            self.columns = keep.iter().map(|&j| self.columns[j].clone()).collect();
        }
    }
}

fn region_name(region: u8) -> &'static str {
    match region {
        1 => "na",
        2 => "eu",
        3 => "aa",
        _ => "world",
    }
}

/// Article-level qualification shared by both designs.
fn qualifies(article: &ArticleRecord, window: YearWindow) -> bool {
    window.contains(article.year) && article.team_size() >= 2 && article.mesh_major_count >= 2
}

/// Build the article-level logit design.
///
/// Outcome is 1 for cross-domain and 0 for mono-domain under the given
/// definition; excluded (mixed) articles are dropped. Covariates are the
/// centered year, mean journal impact, log team size, log mapped-term
/// count, the region count, and the opposite taxonomy's category count
/// (neither for the joint model). With `did`, a post-boundary indicator,
/// region indicators (world as baseline), and their interactions are
/// appended. Rows cluster on the article's modal region.
pub fn build_logit_design(
    corpus: &Corpus,
    xdef: &XDefinition,
    did: bool,
    norm: &CitationNormalization,
    journals: &JournalImpact,
    window: YearWindow,
    boundary: i32,
) -> Result<DesignMatrix> {
    if norm.z.len() != corpus.articles.len() {
        return Err(Error::Input("normalization does not match the corpus".into()));
    }
    let mut columns: Vec<String> = vec![
        "intercept".into(),
        "year_c".into(),
        "journal_z".into(),
        "ln_team".into(),
        "ln_mesh".into(),
        "n_regions".into(),
    ];
    match xdef.taxon {
        XTaxon::Sa => columns.push("n_cip".into()),
        XTaxon::Cip => columns.push("n_sa".into()),
        XTaxon::Joint => {}
    }
    if did {
        columns.push("i_post".into());
        for r in 1..=3u8 {
            columns.push(format!("region_{}", region_name(r)));
        }
        for r in 1..=3u8 {
            columns.push(format!("post_x_region_{}", region_name(r)));
        }
    }

    let center = window.center();
    let mut outcome = Vec::new();
    let mut rows_data = Vec::new();
    let mut cluster_keys = Vec::new();
    let mut rows = Vec::new();
    let mut n_imputed_journals = 0usize;

    for article in corpus.articles.iter() {
        if !qualifies(article, window) {
            continue;
        }
        let y = match xdef.label(article)? {
            Some(XmLabel::X) => 1.0,
            Some(XmLabel::M) => 0.0,
            Some(XmLabel::Excluded) | None => continue,
        };
        let (journal_z, imputed) = journals.get(&article.journal_id);
        if imputed {
            n_imputed_journals += 1;
        }
        let mut row = vec![
            1.0,
            f64::from(article.year) - center,
            journal_z,
            (article.team_size() as f64).ln(),
            f64::from(article.mesh_major_count).ln(),
            article.n_regions() as f64,
        ];
        match xdef.taxon {
            XTaxon::Sa => row.push(article.n_cip() as f64),
            XTaxon::Cip => row.push(article.n_sa() as f64),
            XTaxon::Joint => {}
        }
        let modal = article.modal_region();
        if did {
            let post = if article.year >= boundary { 1.0 } else { 0.0 };
            row.push(post);
            for r in 1..=3u8 {
                row.push(if modal == r { 1.0 } else { 0.0 });
            }
            for r in 1..=3u8 {
                row.push(if modal == r { post } else { 0.0 });
            }
        }
        outcome.push(y);
        rows_data.push(row);
        cluster_keys.push(region_name(modal).to_string());
        rows.push(RowId { article_id: article.article_id.clone(), author_id: None });
    }

    if outcome.is_empty() {
        return Err(Error::EmptyDesign(format!(
            "no articles left after window {}..={}, team size >= 2, mapped terms >= 2, \
             and {} classification",
            window.start,
            window.end,
            xdef.taxon.name()
        )));
    }
    let mut design = DesignMatrix::from_rows(outcome, rows_data, columns, cluster_keys, rows);
    if n_imputed_journals > 0 {
        design.dropped.push(DroppedColumn {
            name: "journal_z".into(),
            reason: format!("{n_imputed_journals} row(s) imputed with 0 for unknown journals"),
        });
    }
    Ok(design)
}

/// Minimum number of qualifying articles an author needs to enter the
/// fixed-effects panel.
pub const MIN_ARTICLES_PER_AUTHOR: usize = 10;

/// Build the (author, article) fixed-effects design.
///
/// Each qualifying article contributes one row per listed author, so
/// career age varies within an article while article-level covariates
/// repeat. Authors with fewer than [`MIN_ARTICLES_PER_AUTHOR`]
/// qualifying articles are removed. Outcome is the normalized citation
/// score. Dummy sets (year, SA presence, CIP presence, region presence)
/// drop one baseline level each: the earliest year, the lowest category
/// index, and the world region. Rows cluster on the author.
pub fn build_fe_design(
    corpus: &Corpus,
    xdef: &XDefinition,
    did: bool,
    norm: &CitationNormalization,
    window: YearWindow,
    boundary: i32,
) -> Result<DesignMatrix> {
    if norm.z.len() != corpus.articles.len() {
        return Err(Error::Input("normalization does not match the corpus".into()));
    }

    // first pass: qualifying articles with labels, author tallies
    let mut qualified: Vec<(usize, f64)> = Vec::new(); // (article index, indicator)
    let mut author_counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut years = BTreeSet::new();
    for (idx, article) in corpus.articles.iter().enumerate() {
        if !qualifies(article, window) {
            continue;
        }
        let indicator = match xdef.label(article)? {
            Some(XmLabel::X) => 1.0,
            Some(XmLabel::M) => 0.0,
            Some(XmLabel::Excluded) | None => continue,
        };
        qualified.push((idx, indicator));
        years.insert(article.year);
        for author in &article.author_ids {
            *author_counts.entry(author.as_str()).or_insert(0) += 1;
        }
    }
    let retained: BTreeSet<&str> = author_counts
        .iter()
        .filter(|(_, &n)| n >= MIN_ARTICLES_PER_AUTHOR)
        .map(|(&a, _)| a)
        .collect();
    if retained.is_empty() {
        return Err(Error::EmptyDesign(format!(
            "no author reaches {MIN_ARTICLES_PER_AUTHOR} qualifying articles"
        )));
    }

    // dummy columns: drop the earliest year, lowest SA/CIP index, world
    let year_levels: Vec<i32> = years.iter().copied().skip(1).collect();
    let mut columns: Vec<String> =
        vec!["ln_team".into(), "ln_mesh".into(), "career_age".into(), xdef.indicator_name()];
    if did {
        columns.push("i_post".into());
        columns.push(format!("{}_x_post", xdef.indicator_name()));
    }
    for y in &year_levels {
        columns.push(format!("year_{y}"));
    }
    for s in 2..=SA_DIM {
        columns.push(format!("sa_{s}"));
    }
    for c in 2..=CIP_DIM {
        columns.push(format!("cip_{c}"));
    }
    for r in 1..=3u8 {
        columns.push(format!("region_{}", region_name(r)));
    }

    let mut outcome = Vec::new();
    let mut rows_data = Vec::new();
    let mut cluster_keys = Vec::new();
    let mut rows = Vec::new();
    for &(idx, indicator) in &qualified {
        let article = &corpus.articles[idx];
        let z = norm.z[idx];
        let post = if article.year >= boundary { 1.0 } else { 0.0 };
        for author_id in &article.author_ids {
            if !retained.contains(author_id.as_str()) {
                continue;
            }
            let age = corpus
                .career_age(author_id, article.year)
                .ok_or_else(|| Error::Input(format!("author {author_id:?} has no profile")))?;
            let mut row = vec![
                (article.team_size() as f64).ln(),
                f64::from(article.mesh_major_count).ln(),
                f64::from(age),
                indicator,
            ];
            if did {
                row.push(post);
                row.push(indicator * post);
            }
            for &y in &year_levels {
                row.push(if article.year == y { 1.0 } else { 0.0 });
            }
            for s in 2..=SA_DIM {
                row.push(if article.sa_vec[s - 1] > 0 { 1.0 } else { 0.0 });
            }
            for c in 2..=CIP_DIM {
                row.push(if article.cip_vec[c - 1] > 0 { 1.0 } else { 0.0 });
            }
            for r in 1..=3usize {
                row.push(if article.region_vec[r - 1] > 0 { 1.0 } else { 0.0 });
            }
            outcome.push(z);
            rows_data.push(row);
            cluster_keys.push(author_id.clone());
            rows.push(RowId {
                article_id: article.article_id.clone(),
                author_id: Some(author_id.clone()),
            });
        }
    }

    if outcome.is_empty() {
        return Err(Error::EmptyDesign("no (author, article) rows survive the filters".into()));
    }
    Ok(DesignMatrix::from_rows(outcome, rows_data, columns, cluster_keys, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorProfile, TaxonomyMaps};
    use crate::metrics::normalize_citations;

    fn article(
        id: &str,
        year: i32,
        citations: u32,
        sa: [u32; SA_DIM],
        authors: &[&str],
        corpus_authors: &BTreeMap<String, AuthorProfile>,
    ) -> ArticleRecord {
        let mut cip_vec = [0u32; CIP_DIM];
        let mut region_vec = [0u32; 4];
        for a in authors {
            let p = &corpus_authors[*a];
            cip_vec[usize::from(p.cip_cluster) - 1] += 1;
            region_vec[usize::from(p.region) - 1] += 1;
        }
        ArticleRecord {
            article_id: id.into(),
            year,
            citations,
            journal_id: "j0".into(),
            author_ids: authors.iter().map(|s| s.to_string()).collect(),
            mesh_branches: vec![],
            sa_vec: sa,
            cip_vec,
            region_vec,
            mesh_major_count: sa.iter().sum(),
        }
    }

    fn make_authors(specs: &[(&str, u8, i32, u8)]) -> BTreeMap<String, AuthorProfile> {
        specs
            .iter()
            .map(|&(id, cip, first, region)| {
                (
                    id.to_string(),
                    AuthorProfile {
                        author_id: id.to_string(),
                        cip_cluster: cip,
                        first_pub_year: first,
                        region,
                    },
                )
            })
            .collect()
    }

    fn taxonomy() -> TaxonomyMaps {
        TaxonomyMaps::new(
            TaxonomyMaps::default_mesh_map(),
            (1..=9).map(|c| (format!("C{c}"), c as u8)).collect(),
            [
                ("United States".to_string(), 1u8),
                ("Germany".to_string(), 2u8),
                ("Japan".to_string(), 3u8),
                ("Brazil".to_string(), 4u8),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap()
    }

    fn base_corpus() -> Corpus {
        let authors = make_authors(&[
            ("a1", 1, 1990, 1),
            ("a2", 2, 1995, 1),
            ("a2x", 2, 1999, 1),
            ("a3", 5, 2000, 2),
            ("a4", 8, 2001, 3),
        ]);
        let articles = vec![
            article("solo", 2010, 5, [1, 1, 0, 0, 0, 0], &["a1"], &authors),
            article("thin", 2011, 9, [1, 0, 0, 0, 0, 0], &["a1", "a2"], &authors),
            article("x1", 2012, 20, [1, 1, 0, 0, 0, 0], &["a1", "a2"], &authors),
            article("m1", 2012, 2, [0, 3, 0, 0, 0, 0], &["a2", "a2x"], &authors),
            article("x2", 2015, 30, [2, 0, 0, 1, 0, 0], &["a3", "a4"], &authors),
            article("x3", 2016, 12, [1, 0, 1, 0, 0, 0], &["a1", "a4"], &authors),
        ];
        Corpus { articles, authors, taxonomy: taxonomy() }
    }

    #[test]
    fn logit_design_applies_exclusion_filters() {
        let corpus = base_corpus();
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let journals = crate::metrics::journal_mean_impact(&corpus, &norm);
        let xdef = XDefinition::from_name("broad", XTaxon::Joint).unwrap();
        let design = build_logit_design(
            &corpus,
            &xdef,
            false,
            &norm,
            &journals,
            YearWindow::default(),
            2014,
        )
        .unwrap();
        let ids: Vec<&str> = design.rows.iter().map(|r| r.article_id.as_str()).collect();
        // solo dropped (k=1), thin dropped (w=1); the rest remain
        assert_eq!(ids, vec!["x1", "m1", "x2", "x3"]);
        assert_eq!(design.outcome.as_slice(), &[1.0, 0.0, 1.0, 1.0]);
        // joint model has no category-count control
        assert!(!design.columns.iter().any(|c| c == "n_cip" || c == "n_sa"));
    }

    #[test]
    fn sa_model_controls_for_cip_count_and_vice_versa() {
        let corpus = base_corpus();
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let journals = crate::metrics::journal_mean_impact(&corpus, &norm);
        for (taxon, expect) in [(XTaxon::Sa, "n_cip"), (XTaxon::Cip, "n_sa")] {
            let xdef = XDefinition::from_name("broad", taxon).unwrap();
            let design = build_logit_design(
                &corpus,
                &xdef,
                false,
                &norm,
                &journals,
                YearWindow::default(),
                2014,
            )
            .unwrap();
            assert!(design.columns.iter().any(|c| c == expect));
        }
    }

    #[test]
    fn did_columns_encode_period_region_and_interaction() {
        let corpus = base_corpus();
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let journals = crate::metrics::journal_mean_impact(&corpus, &norm);
        let xdef = XDefinition::from_name("broad", XTaxon::Joint).unwrap();
        let design = build_logit_design(
            &corpus,
            &xdef,
            true,
            &norm,
            &journals,
            YearWindow::default(),
            2014,
        )
        .unwrap();
        // x2 (2015, modal region tie broken to EU=2) is a post-period row
        let row = design.rows.iter().position(|r| r.article_id == "x2").unwrap();
        let col = |name: &str| design.columns.iter().position(|c| c == name).unwrap();
        assert_eq!(design.x[(row, col("i_post"))], 1.0);
        assert_eq!(design.x[(row, col("region_eu"))], 1.0);
        assert_eq!(design.x[(row, col("post_x_region_eu"))], 1.0);
        assert_eq!(design.x[(row, col("region_na"))], 0.0);
        // x3 is post-period with modal region NA
        let row = design.rows.iter().position(|r| r.article_id == "x3").unwrap();
        assert_eq!(design.x[(row, col("i_post"))], 1.0);
        assert_eq!(design.x[(row, col("post_x_region_na"))], 1.0);
        // pre-period article in NA
        let row = design.rows.iter().position(|r| r.article_id == "x1").unwrap();
        assert_eq!(design.x[(row, col("i_post"))], 0.0);
        assert_eq!(design.x[(row, col("region_na"))], 1.0);
        assert_eq!(design.x[(row, col("post_x_region_na"))], 0.0);
        // no article has modal region AA, so its dummies are constant zero
        assert!(design
            .dropped
            .iter()
            .any(|d| d.name == "region_aa" && d.reason.contains("constant")));
    }

    #[test]
    fn empty_design_names_the_binding_filter() {
        let corpus = base_corpus();
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let journals = crate::metrics::journal_mean_impact(&corpus, &norm);
        let xdef = XDefinition::from_name("broad", XTaxon::Joint).unwrap();
        let err = build_logit_design(
            &corpus,
            &xdef,
            false,
            &norm,
            &journals,
            YearWindow::new(1950, 1960).unwrap(),
            1955,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyDesign(_)));
    }

    fn fe_corpus(n_articles_a1: usize) -> Corpus {
        // a1 and a2 coauthor everything; a3 appears on three articles only
        let authors = make_authors(&[
            ("a1", 1, 1990, 1),
            ("a2", 2, 1995, 1),
            ("a3", 5, 2000, 2),
        ]);
        let mut articles = Vec::new();
        for k in 0..n_articles_a1 {
            let year = 2005 + (k % 12) as i32;
            let team: &[&str] = if k < 3 { &["a1", "a2", "a3"] } else { &["a1", "a2"] };
            let sa = if k % 2 == 0 { [1, 1, 0, 0, 0, 0] } else { [0, 2, 0, 0, 0, 0] };
            articles.push(article(
                &format!("p{k}"),
                year,
                (k * 3) as u32,
                sa,
                team,
                &authors,
            ));
        }
        Corpus { articles, authors, taxonomy: taxonomy() }
    }

    #[test]
    fn fe_design_explodes_rows_and_enforces_author_minimum() {
        let corpus = fe_corpus(12);
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let xdef = XDefinition::from_name("broad", XTaxon::Sa).unwrap();
        let design =
            build_fe_design(&corpus, &xdef, false, &norm, YearWindow::default(), 2014).unwrap();
        // a3 has only 3 qualifying articles, so its rows are gone
        assert!(design
            .rows
            .iter()
            .all(|r| r.author_id.as_deref() != Some("a3")));
        // every article contributes one row per retained author
        assert_eq!(design.n_obs(), 24);
        assert_eq!(design.n_clusters, 2);

        // same article, different career age per author
        let p0_rows: Vec<usize> = design
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.article_id == "p0")
            .map(|(i, _)| i)
            .collect();
        assert_eq!(p0_rows.len(), 2);
        let age_col = design.columns.iter().position(|c| c == "career_age").unwrap();
        let ages: BTreeSet<i64> =
            p0_rows.iter().map(|&i| design.x[(i, age_col)] as i64).collect();
        assert_eq!(ages.len(), 2);
    }

    #[test]
    fn fe_design_drops_authors_below_threshold_entirely() {
        // with only 9 qualifying articles no author is retained
        let corpus = fe_corpus(9);
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let xdef = XDefinition::from_name("broad", XTaxon::Sa).unwrap();
        let err = build_fe_design(&corpus, &xdef, false, &norm, YearWindow::default(), 2014)
            .unwrap_err();
        assert!(matches!(err, Error::EmptyDesign(_)));
    }

    #[test]
    fn year_dummies_drop_the_earliest_level() {
        let corpus = fe_corpus(12);
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let xdef = XDefinition::from_name("broad", XTaxon::Sa).unwrap();
        let design =
            build_fe_design(&corpus, &xdef, false, &norm, YearWindow::default(), 2014).unwrap();
        // years 2005..=2016 all occur; the 2005 dummy is the baseline
        assert!(!design.columns.iter().any(|c| c == "year_2005"));
        assert!(design.columns.iter().any(|c| c == "year_2006"));
        // dummy sets for SA/CIP presence drop their lowest index
        assert!(!design.columns.iter().any(|c| c == "sa_1" || c == "cip_1"));
    }

    #[test]
    fn filters_commute() {
        // applying the qualification filters in any order gives the same
        // row set; spot-check by comparing against a manual pipeline
        let corpus = fe_corpus(12);
        let norm = normalize_citations(&corpus, YearWindow::default()).unwrap();
        let xdef = XDefinition::from_name("broad", XTaxon::Sa).unwrap();
        let design =
            build_fe_design(&corpus, &xdef, false, &norm, YearWindow::default(), 2014).unwrap();

        let mut manual: Vec<(String, String)> = Vec::new();
        let window = YearWindow::default();
        // order: w filter, then k filter, then author counts
        let step1: Vec<&ArticleRecord> =
            corpus.articles.iter().filter(|a| a.mesh_major_count >= 2).collect();
        let step2: Vec<&&ArticleRecord> =
            step1.iter().filter(|a| a.team_size() >= 2 && window.contains(a.year)).collect();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for a in &step2 {
            for id in &a.author_ids {
                *counts.entry(id.as_str()).or_insert(0) += 1;
            }
        }
        for a in &step2 {
            for id in &a.author_ids {
                if counts[id.as_str()] >= MIN_ARTICLES_PER_AUTHOR {
                    manual.push((a.article_id.clone(), id.clone()));
                }
            }
        }
        let got: Vec<(String, String)> = design
            .rows
            .iter()
            .map(|r| (r.article_id.clone(), r.author_id.clone().unwrap()))
            .collect();
        assert_eq!(got, manual);
    }
}
