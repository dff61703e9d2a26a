//! Mono-/cross-domain classification operators and the configuration
//! algebra that restricts which category combinations count as
//! cross-domain.
//!
//! A configuration is a pair of disjoint category sets; an article is
//! cross-domain under it when its count vector has mass on both sides.
//! The broad configuration is the sentinel with empty sets: any two
//! distinct categories qualify.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Taxon;

/// Outcome of a mono/cross classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum XmLabel {
    /// Cross-domain.
    X,
    /// Mono-domain.
    M,
    /// Dropped from joint analyses: cross in one taxonomy but mono in the
    /// other.
    Excluded,
}

/// A category-algebra rule: left set x right set over one taxonomy.
/// Category indices are 1-based throughout, matching the cluster
/// numbering used in outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSpec {
    pub name: String,
    pub arity: Taxon,
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

impl ConfigSpec {
    /// Any two distinct categories qualify as cross-domain.
    pub fn broad(arity: Taxon) -> Self {
        Self { name: "broad".into(), arity, left: BTreeSet::new(), right: BTreeSet::new() }
    }

    /// Shorter-distance interface: SA [1] x [2-4]; CIP [1,3] x [2,4-7].
    pub fn neighboring(arity: Taxon) -> Self {
        let (left, right): (&[usize], &[usize]) = match arity {
            Taxon::Sa => (&[1], &[2, 3, 4]),
            Taxon::Cip => (&[1, 3], &[2, 4, 5, 6, 7]),
        };
        Self {
            name: "neighboring".into(),
            arity,
            left: left.iter().copied().collect(),
            right: right.iter().copied().collect(),
        }
    }

    /// Longer-distance interface: SA [1-4] x [5,6]; CIP [1,3,5] x [4,8].
    pub fn distant(arity: Taxon) -> Self {
        let (left, right): (&[usize], &[usize]) = match arity {
            Taxon::Sa => (&[1, 2, 3, 4], &[5, 6]),
            Taxon::Cip => (&[1, 3, 5], &[4, 8]),
        };
        Self {
            name: "distant".into(),
            arity,
            left: left.iter().copied().collect(),
            right: right.iter().copied().collect(),
        }
    }

    /// Build one of the built-in configurations by name.
    pub fn builtin(name: &str, arity: Taxon) -> Option<Self> {
        match name {
            "broad" => Some(Self::broad(arity)),
            "neighboring" => Some(Self::neighboring(arity)),
            "distant" => Some(Self::distant(arity)),
            _ => None,
        }
    }

    /// Validated custom configuration. Left and right must be nonempty,
    /// disjoint, and within the taxonomy's index range.
    pub fn custom(
        name: impl Into<String>,
        arity: Taxon,
        left: BTreeSet<usize>,
        right: BTreeSet<usize>,
    ) -> Result<Self> {
        let spec = Self { name: name.into(), arity, left, right };
        spec.validate()?;
        Ok(spec)
    }

    pub fn is_broad(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_broad() {
            return Ok(());
        }
        if self.left.is_empty() || self.right.is_empty() {
            return Err(Error::Input(format!(
                "configuration {:?}: both sides must be nonempty",
                self.name
            )));
        }
        let dim = self.arity.dim();
        for &i in self.left.iter().chain(self.right.iter()) {
            if i < 1 || i > dim {
                return Err(Error::Input(format!(
                    "configuration {:?}: category {i} outside 1..={dim}",
                    self.name
                )));
            }
        }
        if self.left.intersection(&self.right).next().is_some() {
            return Err(Error::Input(format!(
                "configuration {:?}: left and right sets overlap",
                self.name
            )));
        }
        Ok(())
    }

    /// Parse a configuration from a flat key=value document:
    ///
    /// ```text
    /// name=techno
    /// arity=sa
    /// left=1,2
    /// right=5,6
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut arity = None;
        let mut left = None;
        let mut right = None;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Input(format!("config line {}: expected key=value", idx + 1)));
            };
            let value = value.trim();
            match key.trim() {
                "name" => name = Some(value.to_string()),
                "arity" => {
                    arity = Some(match value {
                        "sa" => Taxon::Sa,
                        "cip" => Taxon::Cip,
                        other => {
                            return Err(Error::Input(format!("unknown arity {other:?}")));
                        }
                    })
                }
                "left" => left = Some(parse_index_list(value)?),
                "right" => right = Some(parse_index_list(value)?),
                other => return Err(Error::Input(format!("unknown config key {other:?}"))),
            }
        }
        let name = name.ok_or_else(|| Error::Input("config missing name".into()))?;
        let arity = arity.ok_or_else(|| Error::Input("config missing arity".into()))?;
        let left = left.ok_or_else(|| Error::Input("config missing left".into()))?;
        let right = right.ok_or_else(|| Error::Input("config missing right".into()))?;
        Self::custom(name, arity, left, right)
    }
}

fn parse_index_list(text: &str) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let idx: usize =
            part.parse().map_err(|_| Error::Input(format!("bad category index {part:?}")))?;
        out.insert(idx);
    }
    Ok(out)
}

/// Cross-domain iff at least two distinct categories carry counts.
pub fn classify_broad(vec: &[u32]) -> Result<XmLabel> {
    let nonzero = vec.iter().filter(|&&c| c > 0).count();
    if nonzero == 0 {
        return Err(Error::Input("all-zero count vector".into()));
    }
    Ok(if nonzero >= 2 { XmLabel::X } else { XmLabel::M })
}

/// Cross-domain iff the vector has mass in some left category and some
/// right category of the configuration. Broad delegates to
/// [`classify_broad`].
pub fn classify_config(vec: &[u32], spec: &ConfigSpec) -> Result<XmLabel> {
    if vec.len() != spec.arity.dim() {
        return Err(Error::Input(format!(
            "vector length {} does not match arity {:?} ({})",
            vec.len(),
            spec.arity,
            spec.arity.dim()
        )));
    }
    if spec.is_broad() {
        return classify_broad(vec);
    }
    if vec.iter().all(|&c| c == 0) {
        return Err(Error::Input("all-zero count vector".into()));
    }
    let hit = |set: &BTreeSet<usize>| set.iter().any(|&i| vec[i - 1] > 0);
    Ok(if hit(&spec.left) && hit(&spec.right) { XmLabel::X } else { XmLabel::M })
}

/// Combine per-taxonomy labels: cross in both is cross, mono in both is
/// mono, mixed pairs are excluded from joint analyses.
pub fn classify_joint(sa_label: XmLabel, cip_label: XmLabel) -> XmLabel {
    match (sa_label, cip_label) {
        (XmLabel::X, XmLabel::X) => XmLabel::X,
        (XmLabel::M, XmLabel::M) => XmLabel::M,
        _ => XmLabel::Excluded,
    }
}
