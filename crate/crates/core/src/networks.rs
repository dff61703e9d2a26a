//! CIP-SA bipartite association networks, spanning-tree hierarchies,
//! supergroup interface fractions, and topic-breadth profiles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::classify::{classify_broad, classify_config, classify_joint, ConfigSpec, XmLabel};
use crate::corpus::{ArticleRecord, Corpus, CIP_DIM, SA_DIM};
use crate::error::{Error, Result};
use crate::metrics::{CitationNormalization, CooccurrenceMatrix, ZGroup};
use crate::{Taxon, YearWindow};

/// Which article subset a bipartite matrix aggregates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubsetTag {
    /// Mono-domain in both taxonomies.
    Mono,
    /// Cross-domain in both taxonomies.
    Cross,
    /// Positive part of cross minus mono.
    Delta,
}

/// How an article's SA vector is weighted before entering a bipartite
/// row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BipartiteNorm {
    /// Divide by the total term count so every article contributes unit
    /// mass (default).
    UnitMass,
    /// Divide by the number of distinct SA categories.
    DistinctCount,
}

/// CIP-by-SA association matrix (9 rows, 6 columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteMatrix {
    values: Vec<f64>,
    pub tag: SubsetTag,
}

impl BipartiteMatrix {
    pub fn zeros(tag: SubsetTag) -> Self {
        Self { values: vec![0.0; CIP_DIM * SA_DIM], tag }
    }

    /// Entry for (CIP row, SA column), 0-based.
    pub fn get(&self, cip: usize, sa: usize) -> f64 {
        self.values[cip * SA_DIM + sa]
    }

    fn set(&mut self, cip: usize, sa: usize, v: f64) {
        self.values[cip * SA_DIM + sa] = v;
    }

    fn add(&mut self, cip: usize, sa: usize, v: f64) {
        self.values[cip * SA_DIM + sa] += v;
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Entries as `(cip, sa, value)`, 0-based row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(idx, &v)| (idx / SA_DIM, idx % SA_DIM, v))
    }
}

fn joint_label(
    article: &ArticleRecord,
    sa_spec: &ConfigSpec,
    cip_spec: &ConfigSpec,
) -> Result<Option<XmLabel>> {
    if !article.has_sa() {
        return Ok(None);
    }
    let sa = classify_config(&article.sa_vec, sa_spec)?;
    let cip = classify_config(&article.cip_vec, cip_spec)?;
    Ok(Some(classify_joint(sa, cip)))
}

/// Aggregate SA associations per CIP over the mono- or cross-domain
/// subset under the given configurations.
///
/// Each article's SA vector is normalized per `norm` and added to the
/// row of every CIP present; cross-domain contributions are further
/// divided by the number of CIPs so the article's total mass stays
/// fixed. Returns the matrix, the subset size, and a warning flag for an
/// empty subset.
pub fn bipartite(
    corpus: &Corpus,
    subset: SubsetTag,
    norm: BipartiteNorm,
    sa_spec: &ConfigSpec,
    cip_spec: &ConfigSpec,
) -> Result<(BipartiteMatrix, usize, bool)> {
    let want = match subset {
        SubsetTag::Mono => XmLabel::M,
        SubsetTag::Cross => XmLabel::X,
        SubsetTag::Delta => {
            return Err(Error::Input("delta matrices come from network_difference".into()))
        }
    };
    let mut matrix = BipartiteMatrix::zeros(subset);
    let mut n = 0usize;
    for article in &corpus.articles {
        if joint_label(article, sa_spec, cip_spec)? != Some(want) {
            continue;
        }
        let denom = match norm {
            BipartiteNorm::UnitMass => f64::from(article.mesh_major_count),
            BipartiteNorm::DistinctCount => article.n_sa() as f64,
        };
        let n_cip = article.n_cip() as f64;
        for (cip, &count) in article.cip_vec.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for (sa, &terms) in article.sa_vec.iter().enumerate() {
                if terms == 0 {
                    continue;
                }
                matrix.add(cip, sa, f64::from(terms) / denom / n_cip);
            }
        }
        n += 1;
    }
    Ok((matrix, n, n == 0))
}

/// Zero row entries strictly below half the row maximum.
pub fn prune(matrix: &BipartiteMatrix) -> BipartiteMatrix {
    let mut out = matrix.clone();
    for cip in 0..CIP_DIM {
        let row_max = (0..SA_DIM).map(|sa| matrix.get(cip, sa)).fold(0.0, f64::max);
        if row_max <= 0.0 {
            continue;
        }
        let cut = 0.5 * row_max;
        for sa in 0..SA_DIM {
            if matrix.get(cip, sa) < cut {
                out.set(cip, sa, 0.0);
            }
        }
    }
    out
}

/// Element-wise cross minus mono with negative entries clipped to zero.
pub fn network_difference(cross: &BipartiteMatrix, mono: &BipartiteMatrix) -> BipartiteMatrix {
    let mut out = BipartiteMatrix::zeros(SubsetTag::Delta);
    for (cip, sa, v) in cross.entries() {
        out.set(cip, sa, (v - mono.get(cip, sa)).max(0.0));
    }
    out
}

/// One edge of a spanning tree over category co-occurrence, 1-based
/// category ids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MstEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Maximum-weight spanning tree over the off-diagonal co-occurrence
/// weights (a minimum spanning tree on negated weights). Zero-weight
/// pairs are not edges. Ties break lexicographically on (a, b), so the
/// result is deterministic. If the co-occurrence graph is disconnected a
/// spanning forest is returned with the warning flag set.
pub fn mst(c: &CooccurrenceMatrix) -> (Vec<MstEdge>, usize, bool) {
    let d = c.dim();
    let mut edges: Vec<MstEdge> = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let w = c.get(i, j);
            if w > 0.0 {
                edges.push(MstEdge { a: i + 1, b: j + 1, weight: w });
            }
        }
    }
    edges.sort_by(|x, y| {
        y.weight
            .partial_cmp(&x.weight)
            .unwrap()
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    });

    // union-find over d nodes
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(d.saturating_sub(1));
    for e in edges {
        let ra = find(&mut parent, e.a - 1);
        let rb = find(&mut parent, e.b - 1);
        if ra != rb {
            parent[ra] = rb;
            tree.push(e);
        }
    }
    let components = d - tree.len();
    (tree, components, components > 1)
}

/// CIP supergroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Supergroup {
    NeuroBio,
    Health,
    SciEng,
}

impl Supergroup {
    pub fn name(self) -> &'static str {
        match self {
            Supergroup::NeuroBio => "neuro_bio",
            Supergroup::Health => "health",
            Supergroup::SciEng => "sci_eng",
        }
    }

    const ALL: [Supergroup; 3] = [Supergroup::NeuroBio, Supergroup::Health, Supergroup::SciEng];
}

/// Assignment of the nine CIP categories to three supergroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupergroupPartition {
    pub assignment: [Supergroup; CIP_DIM],
}

impl Default for SupergroupPartition {
    /// NeuroBio = CIP 1-4, Health = CIP 5-7, SciEng = CIP 8-9.
    fn default() -> Self {
        use Supergroup::*;
        Self {
            assignment: [
                NeuroBio, NeuroBio, NeuroBio, NeuroBio, Health, Health, Health, SciEng, SciEng,
            ],
        }
    }
}

impl SupergroupPartition {
    /// Supergroups with at least one author on the article.
    fn present(&self, article: &ArticleRecord) -> [bool; 3] {
        let mut present = [false; 3];
        for (cip, &count) in article.cip_vec.iter().enumerate() {
            if count > 0 {
                present[self.assignment[cip] as usize] = true;
            }
        }
        present
    }
}

/// Pooled two-proportion z statistic and two-tailed p-value.
pub fn two_proportion_z(x1: usize, n1: usize, x2: usize, n2: usize) -> (f64, f64) {
    let p1 = x1 as f64 / n1 as f64;
    let p2 = x2 as f64 / n2 as f64;
    let pooled = (x1 + x2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    if se == 0.0 {
        return (0.0, 1.0);
    }
    let z = (p2 - p1) / se;
    let normal = Normal::standard();
    let p = 2.0 * (1.0 - normal.cdf(z.abs()));
    (z, p)
}

/// Period-over-period change in the share of articles covering one
/// combination of supergroups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceRow {
    /// Supergroups that must each have at least one author present
    /// (other groups unrestricted).
    pub combo: Vec<Supergroup>,
    pub n1: usize,
    pub x1: usize,
    pub p1: f64,
    pub n2: usize,
    pub x2: usize,
    pub p2: f64,
    /// Percent change `100 (p2 - p1) / p1`; undefined when p1 = 0.
    pub pct_change: Option<f64>,
    pub z: f64,
    pub p_value: f64,
}

/// For each of the seven nonempty supergroup combinations, the fraction
/// of articles featuring at least one author in every group of the
/// combination, compared between two periods with a pooled two-tailed
/// two-proportion z test.
pub fn supergroup_interfaces(
    corpus: &Corpus,
    partition: &SupergroupPartition,
    period1: YearWindow,
    period2: YearWindow,
) -> Result<Vec<InterfaceRow>> {
    let mut n = [0usize; 2];
    // hit counts per combination bitmask 1..=7 per period
    let mut hits = [[0usize; 8]; 2];
    for article in &corpus.articles {
        let period = if period1.contains(article.year) {
            0
        } else if period2.contains(article.year) {
            1
        } else {
            continue;
        };
        n[period] += 1;
        let present = partition.present(article);
        for mask in 1usize..8 {
            let covered = (0..3).all(|g| mask & (1 << g) == 0 || present[g]);
            if covered {
                hits[period][mask] += 1;
            }
        }
    }
    if n[0] == 0 || n[1] == 0 {
        return Err(Error::Input("both periods must contain articles".into()));
    }

    let mut rows = Vec::with_capacity(7);
    for mask in 1usize..8 {
        let combo: Vec<Supergroup> = (0..3)
            .filter(|g| mask & (1 << g) != 0)
            .map(|g| Supergroup::ALL[g])
            .collect();
        let (x1, x2) = (hits[0][mask], hits[1][mask]);
        let p1 = x1 as f64 / n[0] as f64;
        let p2 = x2 as f64 / n[1] as f64;
        let pct_change = if p1 > 0.0 { Some(100.0 * (p2 - p1) / p1) } else { None };
        let (z, p_value) = two_proportion_z(x1, n[0], x2, n[1]);
        rows.push(InterfaceRow { combo, n1: n[0], x1, p1, n2: n[1], x2, p2, pct_change, z, p_value });
    }
    // singletons first, then pairs, then the triple
    rows.sort_by_key(|r| (r.combo.len(), r.combo.clone()));
    Ok(rows)
}

/// Mean number of SA categories for articles grouped by their number of
/// CIP categories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreadthRow {
    pub n_cip: usize,
    pub mean_n_sa: f64,
    pub n_articles: usize,
}

/// Average SA breadth per CIP count. Optionally restrict to articles
/// cross-domain in both taxonomies under a configuration pair, and/or to
/// one citation-impact side. Empty groups are omitted.
pub fn sa_breadth_by_cip_count(
    corpus: &Corpus,
    joint_filter: Option<(&ConfigSpec, &ConfigSpec)>,
    z_split: Option<(&CitationNormalization, ZGroup)>,
) -> Result<Vec<BreadthRow>> {
    let mut groups: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (idx, article) in corpus.articles.iter().enumerate() {
        if !article.has_sa() {
            continue;
        }
        if let Some((sa_spec, cip_spec)) = joint_filter {
            if joint_label(article, sa_spec, cip_spec)? != Some(XmLabel::X) {
                continue;
            }
        }
        if let Some((norm, side)) = z_split {
            if ZGroup::of(norm.z[idx]) != side {
                continue;
            }
        }
        let entry = groups.entry(article.n_cip()).or_insert((0.0, 0));
        entry.0 += article.n_sa() as f64;
        entry.1 += 1;
    }
    Ok(groups
        .into_iter()
        .map(|(n_cip, (sum, n))| BreadthRow { n_cip, mean_n_sa: sum / n as f64, n_articles: n })
        .collect())
}

/// Broad mono/cross label for a single taxonomy, skipping articles
/// without counts.
pub fn broad_label(article: &ArticleRecord, taxon: Taxon) -> Option<XmLabel> {
    let vec: &[u32] = match taxon {
        Taxon::Sa => &article.sa_vec,
        Taxon::Cip => &article.cip_vec,
    };
    classify_broad(vec).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ArticleRecord, AuthorProfile, TaxonomyMaps, REGION_DIM};
    use approx::assert_abs_diff_eq;

    fn article(
        id: &str,
        year: i32,
        sa: [u32; SA_DIM],
        cip_clusters: &[usize],
    ) -> ArticleRecord {
        let mut cip_vec = [0u32; CIP_DIM];
        for &c in cip_clusters {
            cip_vec[c - 1] += 1;
        }
        ArticleRecord {
            article_id: id.into(),
            year,
            citations: 0,
            journal_id: "j".into(),
            author_ids: cip_clusters.iter().map(|c| format!("a{c}")).collect(),
            mesh_branches: vec![],
            sa_vec: sa,
            cip_vec,
            region_vec: {
                let mut v = [0; REGION_DIM];
                v[0] = cip_clusters.len() as u32;
                v
            },
            mesh_major_count: sa.iter().sum(),
        }
    }

    fn corpus(articles: Vec<ArticleRecord>) -> Corpus {
        let taxonomy = TaxonomyMaps::new(
            TaxonomyMaps::default_mesh_map(),
            (1..=9).map(|c| (format!("C{c}"), c as u8)).collect(),
            [("United States".to_string(), 1u8)].into_iter().collect(),
        )
        .unwrap();
        let mut authors = std::collections::BTreeMap::new();
        for c in 1..=9u8 {
            authors.insert(
                format!("a{c}"),
                AuthorProfile {
                    author_id: format!("a{c}"),
                    cip_cluster: c,
                    first_pub_year: 1950,
                    region: 1,
                },
            );
        }
        Corpus { articles, authors, taxonomy }
    }

    fn broad_pair() -> (ConfigSpec, ConfigSpec) {
        (ConfigSpec::broad(Taxon::Sa), ConfigSpec::broad(Taxon::Cip))
    }

    #[test]
    fn mono_article_contributes_unit_mass_to_one_row() {
        let c = corpus(vec![article("p1", 2010, [3, 0, 0, 0, 0, 0], &[1])]);
        let (sa_spec, cip_spec) = broad_pair();
        let (m, n, empty) =
            bipartite(&c, SubsetTag::Mono, BipartiteNorm::UnitMass, &sa_spec, &cip_spec).unwrap();
        assert_eq!(n, 1);
        assert!(!empty);
        assert_abs_diff_eq!(m.get(0, 0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.total(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cross_article_splits_mass_over_cip_rows() {
        let c = corpus(vec![article("p1", 2010, [0, 1, 1, 0, 0, 0], &[1, 4])]);
        let (sa_spec, cip_spec) = broad_pair();
        let (m, n, _) =
            bipartite(&c, SubsetTag::Cross, BipartiteNorm::UnitMass, &sa_spec, &cip_spec).unwrap();
        assert_eq!(n, 1);
        for (cip, sa) in [(0, 1), (0, 2), (3, 1), (3, 2)] {
            assert_abs_diff_eq!(m.get(cip, sa), 0.25, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(m.total(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn total_mass_equals_subset_size() {
        let c = corpus(vec![
            article("m1", 2010, [3, 0, 0, 0, 0, 0], &[1]),
            article("m2", 2010, [0, 2, 0, 0, 0, 0], &[5]),
            article("x1", 2010, [1, 2, 0, 0, 0, 0], &[1, 8]),
            article("x2", 2010, [0, 1, 1, 1, 0, 0], &[2, 3, 5]),
            // mixed articles belong to neither subset
            article("e1", 2010, [1, 1, 0, 0, 0, 0], &[4]),
        ]);
        let (sa_spec, cip_spec) = broad_pair();
        let (mono, n_mono, _) =
            bipartite(&c, SubsetTag::Mono, BipartiteNorm::UnitMass, &sa_spec, &cip_spec).unwrap();
        let (cross, n_cross, _) =
            bipartite(&c, SubsetTag::Cross, BipartiteNorm::UnitMass, &sa_spec, &cip_spec).unwrap();
        assert_eq!((n_mono, n_cross), (2, 2));
        assert_abs_diff_eq!(mono.total(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cross.total(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn distinct_count_normalization_divides_by_n_sa() {
        let c = corpus(vec![article("x1", 2010, [2, 2, 0, 0, 0, 0], &[1, 4])]);
        let (sa_spec, cip_spec) = broad_pair();
        let (m, _, _) =
            bipartite(&c, SubsetTag::Cross, BipartiteNorm::DistinctCount, &sa_spec, &cip_spec)
                .unwrap();
        // counts of 2 divided by 2 distinct SA and 2 CIPs
        assert_abs_diff_eq!(m.get(0, 0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.total(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_subset_warns_with_zero_matrix() {
        let c = corpus(vec![article("m1", 2010, [3, 0, 0, 0, 0, 0], &[1])]);
        let (sa_spec, cip_spec) = broad_pair();
        let (m, n, empty) =
            bipartite(&c, SubsetTag::Cross, BipartiteNorm::UnitMass, &sa_spec, &cip_spec).unwrap();
        assert_eq!(n, 0);
        assert!(empty);
        assert_abs_diff_eq!(m.total(), 0.0);
    }

    #[test]
    fn prune_is_strict_and_idempotent() {
        let mut m = BipartiteMatrix::zeros(SubsetTag::Mono);
        m.set(0, 0, 0.4);
        m.set(0, 1, 0.19);
        m.set(1, 0, 0.4);
        m.set(1, 1, 0.2);
        let pruned = prune(&m);
        // 0.19 < 0.2 goes, the boundary value 0.2 stays
        assert_eq!(pruned.get(0, 1), 0.0);
        assert_abs_diff_eq!(pruned.get(1, 1), 0.2, epsilon = 1e-15);
        assert_eq!(prune(&pruned), pruned);
        // all-zero rows are untouched
        assert_eq!(pruned.get(5, 0), 0.0);
    }

    #[test]
    fn network_difference_clips_negatives() {
        let mut cross = BipartiteMatrix::zeros(SubsetTag::Cross);
        let mut mono = BipartiteMatrix::zeros(SubsetTag::Mono);
        cross.set(0, 0, 0.3);
        mono.set(0, 0, 0.5);
        cross.set(1, 1, 0.7);
        mono.set(2, 2, 0.4);
        let delta = network_difference(&cross, &mono);
        assert_eq!(delta.tag, SubsetTag::Delta);
        assert_eq!(delta.get(0, 0), 0.0);
        assert_abs_diff_eq!(delta.get(1, 1), 0.7, epsilon = 1e-15);
        assert_eq!(delta.get(2, 2), 0.0);
        assert!(delta.entries().all(|(_, _, v)| v >= 0.0));

        let zero = network_difference(&mono, &mono);
        assert_abs_diff_eq!(zero.total(), 0.0);
    }

    #[test]
    fn mst_on_three_nodes_matches_brute_force() {
        // upper triangle (1,1),(1,2),(1,3),(2,2),(2,3),(3,3) with
        // off-diagonal weights (1,2)=5, (1,3)=1, (2,3)=2
        let weights =
            CooccurrenceMatrix::from_upper(3, vec![0.0, 5.0, 1.0, 0.0, 2.0, 0.0]).unwrap();
        // brute force over the three spanning trees of K3
        let candidates = [
            (vec![(1, 2), (1, 3)], 5.0 + 1.0),
            (vec![(1, 2), (2, 3)], 5.0 + 2.0),
            (vec![(1, 3), (2, 3)], 1.0 + 2.0),
        ];
        let best = candidates.iter().max_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap();
        let (edges, components, warn) = mst(&weights);
        assert_eq!(components, 1);
        assert!(!warn);
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.a, e.b)).collect();
        assert_eq!(pairs, best.0);
        assert_abs_diff_eq!(edges.iter().map(|e| e.weight).sum::<f64>(), best.1);
    }

    #[test]
    fn complete_graph_yields_tree_zero_graph_yields_forest() {
        let (full, _) = crate::metrics::diversity(&[1, 1, 1, 1, 1, 1], None).unwrap();
        let (edges, components, warn) = mst(&full);
        assert_eq!(edges.len(), 5);
        assert_eq!(components, 1);
        assert!(!warn);

        let (mono, _) = crate::metrics::diversity(&[0, 3, 0, 0, 0, 0], None).unwrap();
        let (edges, components, warn) = mst(&mono);
        assert!(edges.is_empty());
        assert_eq!(components, 6);
        assert!(warn);
    }

    #[test]
    fn interface_fractions_and_growth() {
        let mut articles = Vec::new();
        // period 1: 10 articles, 2 covering NeuroBio+Health
        for k in 0..10 {
            let clusters: &[usize] = if k < 2 { &[1, 5] } else { &[1] };
            articles.push(article(&format!("p1_{k}"), 2000, [1, 0, 0, 0, 0, 0], clusters));
        }
        // period 2: 10 articles, 3 covering NeuroBio+Health
        for k in 0..10 {
            let clusters: &[usize] = if k < 3 { &[2, 6] } else { &[2] };
            articles.push(article(&format!("p2_{k}"), 2010, [1, 0, 0, 0, 0, 0], clusters));
        }
        let c = corpus(articles);
        let rows = supergroup_interfaces(
            &c,
            &SupergroupPartition::default(),
            YearWindow::new(1999, 2008).unwrap(),
            YearWindow::new(2009, 2018).unwrap(),
        )
        .unwrap();
        assert_eq!(rows.len(), 7);
        let pair = rows
            .iter()
            .find(|r| r.combo == vec![Supergroup::NeuroBio, Supergroup::Health])
            .unwrap();
        assert_eq!((pair.x1, pair.x2), (2, 3));
        assert_abs_diff_eq!(pair.pct_change.unwrap(), 50.0, epsilon = 1e-9);
        // every article features NeuroBio
        let nb = rows.iter().find(|r| r.combo == vec![Supergroup::NeuroBio]).unwrap();
        assert_abs_diff_eq!(nb.p1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nb.pct_change.unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nb.z, 0.0, epsilon = 1e-12);
        // SciEng never appears: p1 = 0 makes the change undefined
        let se = rows.iter().find(|r| r.combo == vec![Supergroup::SciEng]).unwrap();
        assert_eq!(se.pct_change, None);
    }

    #[test]
    fn two_proportion_z_matches_hand_computation() {
        // x1=86 of 1000 vs x2=107 of 1000, pooled p = 0.0965
        let (z, p) = two_proportion_z(86, 1000, 107, 1000);
        assert_abs_diff_eq!(z, 1.5903, epsilon = 1e-4);
        assert_abs_diff_eq!(p, 0.1118, epsilon = 1e-4);
        let (z0, p0) = two_proportion_z(5, 100, 5, 100);
        assert_eq!(z0, 0.0);
        assert_abs_diff_eq!(p0, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn breadth_means_match_hand_computation() {
        let c = corpus(vec![
            article("a", 2010, [1, 1, 0, 0, 0, 0], &[1]),
            article("b", 2010, [1, 1, 1, 0, 0, 0], &[1]),
            article("c", 2010, [1, 0, 0, 0, 0, 0], &[2]),
            article("d", 2010, [1, 1, 0, 0, 0, 0], &[1, 2]),
            article("e", 2010, [1, 1, 1, 1, 0, 0], &[1, 3]),
            article("f", 2010, [1, 1, 1, 1, 1, 1], &[1, 2, 3]),
        ]);
        let rows = sa_breadth_by_cip_count(&c, None, None).unwrap();
        let get = |k: usize| rows.iter().find(|r| r.n_cip == k).unwrap();
        assert_abs_diff_eq!(get(1).mean_n_sa, 2.0, epsilon = 1e-12); // (2+3+1)/3
        assert_abs_diff_eq!(get(2).mean_n_sa, 3.0, epsilon = 1e-12); // (2+4)/2
        assert_abs_diff_eq!(get(3).mean_n_sa, 6.0, epsilon = 1e-12);
        assert_eq!(get(1).n_articles, 3);

        // filtered to joint cross-domain articles only
        let (sa_spec, cip_spec) = broad_pair();
        let rows = sa_breadth_by_cip_count(&c, Some((&sa_spec, &cip_spec)), None).unwrap();
        assert!(rows.iter().all(|r| r.n_cip >= 2));
    }

    #[test]
    fn uniform_breadth_reports_the_constant() {
        let c = corpus(vec![
            article("a", 2010, [1, 1, 0, 0, 0, 0], &[1]),
            article("b", 2010, [0, 1, 1, 0, 0, 0], &[1, 2]),
            article("c", 2010, [0, 0, 1, 1, 0, 0], &[1, 2, 3]),
        ]);
        let rows = sa_breadth_by_cip_count(&c, None, None).unwrap();
        for row in rows {
            assert_abs_diff_eq!(row.mean_n_sa, 2.0, epsilon = 1e-12);
        }
    }
}
