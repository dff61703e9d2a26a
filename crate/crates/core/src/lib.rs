//! Measurement toolkit for cross-domain science.
//!
//! Classifies publication records as mono- or cross-domain over topic (SA)
//! and discipline (CIP) taxonomies, computes co-occurrence diversity
//! statistics and their aggregates, builds CIP-SA bipartite association
//! networks, and fits logit propensity and author fixed-effects citation
//! models with cluster-robust covariance. A deterministic synthetic-corpus
//! generator with planted effects serves as the validation oracle for the
//! estimators.

pub mod classify;
pub mod collapse;
pub mod corpus;
pub mod econ;
pub mod error;
pub mod metrics;
pub mod networks;
pub mod synth;

pub use classify::{classify_broad, classify_config, classify_joint, ConfigSpec, XmLabel};
pub use collapse::CollapseSpec;
pub use corpus::{
    apply_taxonomy, parse_corpus, ArticleRecord, AuthorProfile, Corpus, IngestReport, LabelKind,
    TaxonomyMaps, CIP_DIM, REGION_DIM, SA_DIM,
};
pub use econ::{
    build_fe_design, build_logit_design, did_report, fit_fe_ols, fit_logit, premium,
    DesignMatrix, DidReport, FitResult, XDefinition, XTaxon,
};
pub use error::{Error, Result};
pub use metrics::{
    aggregate_cooccurrence, category_count_fractions, diversity, diversity_timeseries,
    journal_mean_impact, normalize_citations, shift_matrix, shuffle_baseline, viz_matrix,
    CitationNormalization, CohortStats, CooccurrenceMatrix, JournalImpact, MatrixKind,
    ShiftMatrix, ZGroup,
};
pub use networks::{
    bipartite, mst, network_difference, prune, sa_breadth_by_cip_count, supergroup_interfaces,
    two_proportion_z, BipartiteMatrix, BipartiteNorm, MstEdge, SubsetTag, Supergroup,
    SupergroupPartition,
};
pub use synth::{generate, OracleRecord, SynthParams};

use serde::{Deserialize, Serialize};

/// Which categorical taxonomy a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Taxon {
    /// Topic clusters derived from MeSH branches (6 categories).
    Sa,
    /// Disciplinary clusters derived from department codes (9 categories).
    Cip,
}

impl Taxon {
    pub fn dim(self) -> usize {
        match self {
            Taxon::Sa => SA_DIM,
            Taxon::Cip => CIP_DIM,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Taxon::Sa => "sa",
            Taxon::Cip => "cip",
        }
    }
}

/// Inclusive year range used to window an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearWindow {
    pub start: i32,
    pub end: i32,
}

impl YearWindow {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::Input(format!("window start {start} after end {end}")));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        year >= self.start && year <= self.end
    }

    /// Midpoint used to center year covariates.
    pub fn center(&self) -> f64 {
        f64::from(self.start + self.end) / 2.0
    }
}

impl Default for YearWindow {
    fn default() -> Self {
        Self { start: 1970, end: 2018 }
    }
}

/// Default boundary between the pre and post periods.
pub const DEFAULT_BOUNDARY_YEAR: i32 = 2014;
