//! Category collapse: merge count-vector categories into supergroups
//! (union of counts) and drop categories that are not listed.
//!
//! The text syntax mirrors the matrix motifs used to label diversity
//! panels: groups separated by `|`, each group a bracketed list of
//! 1-based indices and ranges, e.g. `[1,3]|[2,4-7]`. Bare indices are
//! accepted as singleton groups, so `1|2|[5,6]` is valid.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered partition of a subset of category indices into supergroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseSpec {
    groups: Vec<BTreeSet<usize>>,
    source_dim: usize,
}

impl CollapseSpec {
    pub fn new(groups: Vec<BTreeSet<usize>>, source_dim: usize) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Input("collapse spec has no groups".into()));
        }
        let mut seen = BTreeSet::new();
        for group in &groups {
            if group.is_empty() {
                return Err(Error::Input("collapse group is empty".into()));
            }
            for &i in group {
                if i < 1 || i > source_dim {
                    return Err(Error::Input(format!(
                        "collapse index {i} outside 1..={source_dim}"
                    )));
                }
                if !seen.insert(i) {
                    return Err(Error::Input(format!("collapse index {i} appears twice")));
                }
            }
        }
        Ok(Self { groups, source_dim })
    }

    /// Parse the bracket syntax, e.g. `[1,3]|[2,4-7]`.
    pub fn parse(text: &str, source_dim: usize) -> Result<Self> {
        let mut groups = Vec::new();
        for part in text.split('|') {
            let part = part.trim();
            let inner = part.strip_prefix('[').and_then(|p| p.strip_suffix(']')).unwrap_or(part);
            let mut group = BTreeSet::new();
            for item in inner.split(',') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                if let Some((lo, hi)) = item.split_once('-') {
                    let lo: usize = lo.trim().parse().map_err(|_| bad_item(item))?;
                    let hi: usize = hi.trim().parse().map_err(|_| bad_item(item))?;
                    if lo > hi {
                        return Err(Error::Input(format!("empty range {item:?}")));
                    }
                    group.extend(lo..=hi);
                } else {
                    group.insert(item.parse().map_err(|_| bad_item(item))?);
                }
            }
            groups.push(group);
        }
        Self::new(groups, source_dim)
    }

    /// Number of supergroups (the collapsed dimension).
    pub fn dim(&self) -> usize {
        self.groups.len()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    /// Collapse a count vector: each output slot is the sum of its
    /// group's counts; unlisted categories are dropped.
    pub fn apply(&self, vec: &[u32]) -> Result<Vec<u32>> {
        if vec.len() != self.source_dim {
            return Err(Error::Input(format!(
                "vector length {} does not match collapse source dim {}",
                vec.len(),
                self.source_dim
            )));
        }
        Ok(self
            .groups
            .iter()
            .map(|group| group.iter().map(|&i| vec[i - 1]).sum())
            .collect())
    }
}

fn bad_item(item: &str) -> Error {
    Error::Input(format!("bad collapse index {item:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_brackets_ranges_and_bare_indices() {
        let spec = CollapseSpec::parse("[1,3]|[2,4-7]", 9).unwrap();
        assert_eq!(spec.dim(), 2);
        assert_eq!(spec.apply(&[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap(), vec![4, 24]);

        let spec = CollapseSpec::parse("1|2|[5,6]", 6).unwrap();
        assert_eq!(spec.apply(&[9, 8, 7, 6, 5, 4]).unwrap(), vec![9, 8, 9]);
    }

    #[test]
    fn dropped_categories_do_not_contribute() {
        // category 4 excluded
        let spec = CollapseSpec::parse("[1-3]|[5,6]", 6).unwrap();
        assert_eq!(spec.apply(&[1, 1, 1, 100, 2, 2]).unwrap(), vec![3, 4]);
    }

    #[test]
    fn rejects_overlap_out_of_range_and_garbage() {
        assert!(CollapseSpec::parse("[1,2]|[2,3]", 6).is_err());
        assert!(CollapseSpec::parse("[1]|[7]", 6).is_err());
        assert!(CollapseSpec::parse("[1]|[x]", 6).is_err());
        assert!(CollapseSpec::parse("[3-1]", 6).is_err());
    }
}
