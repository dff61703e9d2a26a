//! Article-level and aggregate statistics: citation normalization,
//! co-occurrence diversity matrices, period shift matrices, deflated
//! time series, randomization baselines, and category-count fractions.

mod cooccur;
mod fractions;
mod timeseries;
mod zscore;

pub use cooccur::{
    aggregate_cooccurrence, diversity, shift_matrix, viz_matrix, CooccurrenceMatrix, MatrixKind,
    ShiftMatrix,
};
pub use fractions::{category_count_fractions, FractionRow, ZGroup};
pub use timeseries::{diversity_timeseries, shuffle_baseline, DiversityPoint, DiversitySeries};
pub use zscore::{
    journal_mean_impact, normalize_citations, CitationNormalization, CohortStats, JournalImpact,
};
