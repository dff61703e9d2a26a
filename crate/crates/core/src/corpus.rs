//! Corpus data model: publication records, author profiles, taxonomy
//! tables, and the line-delimited file formats they are exchanged in.
//!
//! Raw article and author records carry only observable fields; the
//! category count vectors (SA from MeSH branch letters, CIP and region
//! from author profiles) are derived during parsing against a
//! [`TaxonomyMaps`] instance. A parsed [`Corpus`] is immutable and safe
//! to share across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of topic (SA) categories.
pub const SA_DIM: usize = 6;
/// Number of discipline (CIP) categories.
pub const CIP_DIM: usize = 9;
/// Number of geographic regions.
pub const REGION_DIM: usize = 4;

/// MeSH branch letters that map onto SA categories. Branches outside this
/// set are dropped from SA vectors and tallied in the ingest report.
pub const MAPPED_MESH_BRANCHES: [char; 9] = ['A', 'B', 'C', 'E', 'F', 'G', 'J', 'L', 'N'];

/// One publication with its derived category count vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub article_id: String,
    pub year: i32,
    pub citations: u32,
    pub journal_id: String,
    pub author_ids: Vec<String>,
    /// Major-topic MeSH branch letters as given in the raw record.
    pub mesh_branches: Vec<char>,
    /// Counts of mapped MeSH terms per SA category (1..=6 at index 0..=5).
    pub sa_vec: [u32; SA_DIM],
    /// Counts of authors per CIP category; sums to the team size.
    pub cip_vec: [u32; CIP_DIM],
    /// Counts of authors per region.
    pub region_vec: [u32; REGION_DIM],
    /// Number of mapped major MeSH terms (w); equals the SA vector total.
    pub mesh_major_count: u32,
}

impl ArticleRecord {
    /// Team size k.
    pub fn team_size(&self) -> usize {
        self.author_ids.len()
    }

    /// Number of distinct SA categories present.
    pub fn n_sa(&self) -> usize {
        self.sa_vec.iter().filter(|&&c| c > 0).count()
    }

    /// Number of distinct CIP categories present.
    pub fn n_cip(&self) -> usize {
        self.cip_vec.iter().filter(|&&c| c > 0).count()
    }

    /// Number of distinct regions present.
    pub fn n_regions(&self) -> usize {
        self.region_vec.iter().filter(|&&c| c > 0).count()
    }

    /// Whether the article has at least one mapped MeSH term. Articles
    /// without any are excluded from SA-based analyses.
    pub fn has_sa(&self) -> bool {
        self.mesh_major_count > 0
    }

    /// The article's single region label: the modal author region, ties
    /// broken by region priority 1 > 2 > 3 > 4.
    pub fn modal_region(&self) -> u8 {
        let mut best = 0usize;
        for r in 1..REGION_DIM {
            if self.region_vec[r] > self.region_vec[best] {
                best = r;
            }
        }
        (best + 1) as u8
    }
}

/// One scholar. Every author maps onto a single CIP cluster and region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorProfile {
    pub author_id: String,
    /// CIP cluster, 1..=9.
    pub cip_cluster: u8,
    pub first_pub_year: i32,
    /// Region, 1..=4.
    pub region: u8,
}

/// Label lookup tables: MeSH branch -> SA, CIP code -> cluster,
/// country -> region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyMaps {
    pub mesh_branch_to_sa: BTreeMap<char, u8>,
    pub cip_code_to_cluster: BTreeMap<String, u8>,
    pub country_to_region: BTreeMap<String, u8>,
}

/// Kind of raw label passed to [`apply_taxonomy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    Mesh,
    Cip,
    Country,
}

impl TaxonomyMaps {
    /// The standard MeSH branch clustering: the nine science-oriented
    /// branches merged into six SA categories.
    pub fn default_mesh_map() -> BTreeMap<char, u8> {
        [
            ('F', 1),
            ('A', 2),
            ('B', 2),
            ('G', 3),
            ('C', 4),
            ('N', 4),
            ('E', 5),
            ('J', 6),
            ('L', 6),
        ]
        .into_iter()
        .collect()
    }

    pub fn new(
        mesh_branch_to_sa: BTreeMap<char, u8>,
        cip_code_to_cluster: BTreeMap<String, u8>,
        country_to_region: BTreeMap<String, u8>,
    ) -> Result<Self> {
        let maps = Self { mesh_branch_to_sa, cip_code_to_cluster, country_to_region };
        maps.validate()?;
        Ok(maps)
    }

    /// Check coverage and value ranges. The MeSH map must cover exactly
    /// the nine mapped branches.
    pub fn validate(&self) -> Result<()> {
        let expected: BTreeSet<char> = MAPPED_MESH_BRANCHES.into_iter().collect();
        let got: BTreeSet<char> = self.mesh_branch_to_sa.keys().copied().collect();
        if got != expected {
            return Err(Error::Input(format!(
                "mesh map must cover exactly branches {expected:?}, got {got:?}"
            )));
        }
        for (k, &v) in &self.mesh_branch_to_sa {
            if !(1..=SA_DIM as u8).contains(&v) {
                return Err(Error::Input(format!("mesh branch {k} maps to out-of-range SA {v}")));
            }
        }
        for (k, &v) in &self.cip_code_to_cluster {
            if !(1..=CIP_DIM as u8).contains(&v) {
                return Err(Error::Input(format!("cip code {k} maps to out-of-range cluster {v}")));
            }
        }
        for (k, &v) in &self.country_to_region {
            if !(1..=REGION_DIM as u8).contains(&v) {
                return Err(Error::Input(format!("country {k} maps to out-of-range region {v}")));
            }
        }
        Ok(())
    }

    /// Load `mesh.csv`, `cip.csv`, and `country.csv` from a directory.
    /// Each is a two-column `label,cluster_index` table with a header row.
    pub fn load_dir(dir: &std::path::Path) -> Result<Self> {
        let mesh_rows = read_two_column_csv(&dir.join("mesh.csv"))?;
        let mut mesh = BTreeMap::new();
        for (label, cluster, loc) in mesh_rows {
            let mut chars = label.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::Schema {
                    location: loc,
                    message: format!("mesh label must be a single letter, got {label:?}"),
                });
            };
            mesh.insert(c, cluster);
        }
        let cip = read_two_column_csv(&dir.join("cip.csv"))?
            .into_iter()
            .map(|(label, cluster, _)| (label, cluster))
            .collect();
        let country = read_two_column_csv(&dir.join("country.csv"))?
            .into_iter()
            .map(|(label, cluster, _)| (label, cluster))
            .collect();
        Self::new(mesh, cip, country)
    }

    /// Write the three taxonomy tables into a directory.
    pub fn write_dir(&self, dir: &std::path::Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut mesh = String::from("label,cluster\n");
        for (k, v) in &self.mesh_branch_to_sa {
            mesh.push_str(&format!("{k},{v}\n"));
        }
        std::fs::write(dir.join("mesh.csv"), mesh)?;
        let mut cip = String::from("label,cluster\n");
        for (k, v) in &self.cip_code_to_cluster {
            cip.push_str(&format!("{k},{v}\n"));
        }
        std::fs::write(dir.join("cip.csv"), cip)?;
        let mut country = String::from("label,cluster\n");
        for (k, v) in &self.country_to_region {
            country.push_str(&format!("{k},{v}\n"));
        }
        std::fs::write(dir.join("country.csv"), country)?;
        Ok(())
    }
}

fn read_two_column_csv(path: &std::path::Path) -> Result<Vec<(String, u8, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Input(format!("cannot read taxonomy table {}: {e}", path.display()))
    })?;
    let name = path.display().to_string();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.contains(',') => {}
        _ => {
            return Err(Error::Schema {
                location: format!("{name}:1"),
                message: "missing header row".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let loc = format!("{}:{}", name, idx + 1);
        let Some((label, cluster)) = line.split_once(',') else {
            return Err(Error::Schema { location: loc, message: "expected label,cluster".into() });
        };
        let cluster: u8 = cluster.trim().parse().map_err(|_| Error::Schema {
            location: loc.clone(),
            message: format!("cluster index {cluster:?} is not an integer"),
        })?;
        rows.push((label.trim().to_string(), cluster, loc));
    }
    Ok(rows)
}

/// Map a raw label to its cluster index. Labels outside the mapped set
/// return `None` rather than an error; empty labels are input errors.
pub fn apply_taxonomy(raw_label: &str, kind: LabelKind, maps: &TaxonomyMaps) -> Result<Option<u8>> {
    if raw_label.is_empty() {
        return Err(Error::Input("empty label".into()));
    }
    Ok(match kind {
        LabelKind::Mesh => {
            let mut chars = raw_label.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::Input(format!(
                    "mesh branch label must be a single letter, got {raw_label:?}"
                )));
            };
            maps.mesh_branch_to_sa.get(&c).copied()
        }
        LabelKind::Cip => maps.cip_code_to_cluster.get(raw_label).copied(),
        LabelKind::Country => maps.country_to_region.get(raw_label).copied(),
    })
}

/// A fully parsed and validated corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    pub articles: Vec<ArticleRecord>,
    pub authors: BTreeMap<String, AuthorProfile>,
    pub taxonomy: TaxonomyMaps,
}

impl Corpus {
    /// Career age of an author at publication year: years since first
    /// publication. Nonnegative for every (author, article) pair by
    /// ingestion invariant.
    pub fn career_age(&self, author_id: &str, year: i32) -> Option<i32> {
        self.authors.get(author_id).map(|a| year - a.first_pub_year)
    }

    pub fn write_articles(&self, w: &mut impl Write) -> Result<()> {
        for a in &self.articles {
            let raw = RawArticle {
                article_id: a.article_id.clone(),
                year: a.year,
                citations: i64::from(a.citations),
                journal_id: a.journal_id.clone(),
                author_ids: a.author_ids.clone(),
                mesh_branches: a.mesh_branches.iter().map(|c| c.to_string()).collect(),
            };
            serde_json::to_writer(&mut *w, &raw).map_err(|e| Error::Json {
                location: a.article_id.clone(),
                source: e,
            })?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write_authors(&self, w: &mut impl Write) -> Result<()> {
        // Invert the taxonomy to recover a representative raw label per
        // cluster so a round trip through the file format is possible.
        let mut cip_label: BTreeMap<u8, &String> = BTreeMap::new();
        for (code, &cluster) in &self.taxonomy.cip_code_to_cluster {
            cip_label.entry(cluster).or_insert(code);
        }
        let mut country_label: BTreeMap<u8, &String> = BTreeMap::new();
        for (name, &region) in &self.taxonomy.country_to_region {
            country_label.entry(region).or_insert(name);
        }
        for a in self.authors.values() {
            let raw = RawAuthor {
                author_id: a.author_id.clone(),
                cip_code: (*cip_label.get(&a.cip_cluster).ok_or_else(|| {
                    Error::Input(format!("no cip code maps to cluster {}", a.cip_cluster))
                })?)
                .clone(),
                first_pub_year: a.first_pub_year,
                country: (*country_label.get(&a.region).ok_or_else(|| {
                    Error::Input(format!("no country maps to region {}", a.region))
                })?)
                .clone(),
            };
            serde_json::to_writer(&mut *w, &raw).map_err(|e| Error::Json {
                location: a.author_id.clone(),
                source: e,
            })?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArticle {
    article_id: String,
    year: i32,
    citations: i64,
    journal_id: String,
    author_ids: Vec<String>,
    mesh_branches: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAuthor {
    author_id: String,
    cip_code: String,
    first_pub_year: i32,
    country: String,
}

/// One rejected record with its location and reason.
#[derive(Debug, Clone, Serialize)]
pub struct RecordError {
    pub location: String,
    pub message: String,
}

/// Ingestion diagnostics: rejected records and skipped labels.
#[derive(Debug, Clone, Default, Serialize)]
pub struct IngestReport {
    pub authors_read: usize,
    pub authors_kept: usize,
    pub articles_read: usize,
    pub articles_kept: usize,
    /// Unmapped MeSH branch letters dropped from SA vectors, tallied per
    /// letter.
    pub skipped_mesh: BTreeMap<String, u64>,
    /// Articles kept with zero mapped MeSH terms (excluded from SA-based
    /// analyses downstream).
    pub articles_without_sa: usize,
    pub record_errors: Vec<RecordError>,
}

/// Parse line-delimited author and article streams into a [`Corpus`].
///
/// Records that violate the schema or reference unknown authors are
/// rejected with a per-record diagnostic in the report. In strict mode
/// any rejected record fails the whole parse. Unmapped MeSH branches are
/// dropped from SA vectors and tallied.
pub fn parse_corpus(
    article_stream: impl BufRead,
    author_stream: impl BufRead,
    maps: &TaxonomyMaps,
    strict: bool,
) -> Result<(Corpus, IngestReport)> {
    maps.validate()?;
    let mut report = IngestReport::default();
    let mut authors: BTreeMap<String, AuthorProfile> = BTreeMap::new();

    for (idx, line) in author_stream.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        report.authors_read += 1;
        let loc = format!("authors:{}", idx + 1);
        let raw: RawAuthor = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                report.record_errors.push(RecordError { location: loc, message: e.to_string() });
                continue;
            }
        };
        let mut reject = |message: String| {
            report.record_errors.push(RecordError { location: loc.clone(), message });
        };
        if raw.author_id.is_empty() {
            reject("empty author_id".into());
            continue;
        }
        if authors.contains_key(&raw.author_id) {
            reject(format!("duplicate author_id {:?}", raw.author_id));
            continue;
        }
        let Some(cip_cluster) = apply_taxonomy(&raw.cip_code, LabelKind::Cip, maps)? else {
            reject(format!("cip code {:?} not in taxonomy", raw.cip_code));
            continue;
        };
        let Some(region) = apply_taxonomy(&raw.country, LabelKind::Country, maps)? else {
            reject(format!("country {:?} not in taxonomy", raw.country));
            continue;
        };
        authors.insert(
            raw.author_id.clone(),
            AuthorProfile {
                author_id: raw.author_id,
                cip_cluster,
                first_pub_year: raw.first_pub_year,
                region,
            },
        );
    }
    report.authors_kept = authors.len();

    let mut articles = Vec::new();
    let mut seen_articles: BTreeSet<String> = BTreeSet::new();
    for (idx, line) in article_stream.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        report.articles_read += 1;
        let loc = format!("articles:{}", idx + 1);
        let raw: RawArticle = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                report.record_errors.push(RecordError { location: loc, message: e.to_string() });
                continue;
            }
        };
        match build_article(raw, &authors, maps, &mut report.skipped_mesh) {
            Ok(article) => {
                if !seen_articles.insert(article.article_id.clone()) {
                    report.record_errors.push(RecordError {
                        location: loc,
                        message: format!("duplicate article_id {:?}", article.article_id),
                    });
                    continue;
                }
                if !article.has_sa() {
                    report.articles_without_sa += 1;
                }
                articles.push(article);
            }
            Err(message) => {
                report.record_errors.push(RecordError { location: loc, message });
            }
        }
    }
    report.articles_kept = articles.len();

    if strict && !report.record_errors.is_empty() {
        let first = &report.record_errors[0];
        return Err(Error::StrictIngest(
            report.record_errors.len(),
            format!("{}: {}", first.location, first.message),
        ));
    }

    let corpus = Corpus { articles, authors, taxonomy: maps.clone() };
    Ok((corpus, report))
}

fn build_article(
    raw: RawArticle,
    authors: &BTreeMap<String, AuthorProfile>,
    maps: &TaxonomyMaps,
    skipped_mesh: &mut BTreeMap<String, u64>,
) -> std::result::Result<ArticleRecord, String> {
    if raw.article_id.is_empty() {
        return Err("empty article_id".into());
    }
    if raw.citations < 0 {
        return Err(format!("negative citation count {}", raw.citations));
    }
    if raw.author_ids.is_empty() {
        return Err("empty author list".into());
    }
    let citations = u32::try_from(raw.citations).map_err(|_| "citation count overflow")?;

    let mut cip_vec = [0u32; CIP_DIM];
    let mut region_vec = [0u32; REGION_DIM];
    for id in &raw.author_ids {
        let Some(profile) = authors.get(id) else {
            return Err(format!("author id {id:?} does not resolve to a profile"));
        };
        if profile.first_pub_year > raw.year {
            return Err(format!(
                "author {id:?} first publication year {} is after article year {}",
                profile.first_pub_year, raw.year
            ));
        }
        cip_vec[usize::from(profile.cip_cluster) - 1] += 1;
        region_vec[usize::from(profile.region) - 1] += 1;
    }

    let mut sa_vec = [0u32; SA_DIM];
    let mut mesh_branches = Vec::with_capacity(raw.mesh_branches.len());
    let mut mapped = 0u32;
    for branch in &raw.mesh_branches {
        let mut chars = branch.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(format!("mesh branch {branch:?} is not a single letter"));
        };
        mesh_branches.push(c);
        match maps.mesh_branch_to_sa.get(&c) {
            Some(&sa) => {
                sa_vec[usize::from(sa) - 1] += 1;
                mapped += 1;
            }
            None => {
                *skipped_mesh.entry(c.to_string()).or_insert(0) += 1;
            }
        }
    }

    Ok(ArticleRecord {
        article_id: raw.article_id,
        year: raw.year,
        citations,
        journal_id: raw.journal_id,
        author_ids: raw.author_ids,
        mesh_branches,
        sa_vec,
        cip_vec,
        region_vec,
        mesh_major_count: mapped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn test_maps() -> TaxonomyMaps {
        let cip = [("NEURO", 1), ("BIO", 2), ("PSY", 3), ("ENG", 8)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let country = [("United States", 1), ("Germany", 2), ("Japan", 3), ("Brazil", 4)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        TaxonomyMaps::new(TaxonomyMaps::default_mesh_map(), cip, country).unwrap()
    }

    fn author_line(id: &str, cip: &str, year: i32, country: &str) -> String {
        format!(
            r#"{{"author_id":"{id}","cip_code":"{cip}","first_pub_year":{year},"country":"{country}"}}"#
        )
    }

    fn article_line(id: &str, year: i32, authors: &[&str], mesh: &[&str]) -> String {
        let authors = authors.iter().map(|a| format!("\"{a}\"")).collect::<Vec<_>>().join(",");
        let mesh = mesh.iter().map(|m| format!("\"{m}\"")).collect::<Vec<_>>().join(",");
        format!(
            r#"{{"article_id":"{id}","year":{year},"citations":3,"journal_id":"j1","author_ids":[{authors}],"mesh_branches":[{mesh}]}}"#
        )
    }

    fn parse(articles: &str, authors: &str, strict: bool) -> Result<(Corpus, IngestReport)> {
        parse_corpus(Cursor::new(articles), Cursor::new(authors), &test_maps(), strict)
    }

    #[test]
    fn apply_taxonomy_maps_and_unmapped() {
        let maps = test_maps();
        assert_eq!(apply_taxonomy("F", LabelKind::Mesh, &maps).unwrap(), Some(1));
        // branch D is outside the nine mapped branches
        assert_eq!(apply_taxonomy("D", LabelKind::Mesh, &maps).unwrap(), None);
        assert_eq!(apply_taxonomy("United States", LabelKind::Country, &maps).unwrap(), Some(1));
        assert!(apply_taxonomy("", LabelKind::Mesh, &maps).is_err());
        assert!(apply_taxonomy("FF", LabelKind::Mesh, &maps).is_err());
    }

    #[test]
    fn derives_sa_counts_from_mesh_tally() {
        let authors = author_line("a1", "NEURO", 2000, "United States");
        // F,F,C -> two terms in SA 1 and one in SA 4
        let articles = article_line("p1", 2010, &["a1"], &["F", "F", "C"]);
        let (corpus, report) = parse(&articles, &authors, true).unwrap();
        let a = &corpus.articles[0];
        assert_eq!(a.sa_vec, [2, 0, 0, 1, 0, 0]);
        assert_eq!(a.n_sa(), 2);
        assert_eq!(a.mesh_major_count, 3);
        assert!(report.record_errors.is_empty());
    }

    #[test]
    fn derives_cip_counts_from_author_departments() {
        let authors = [
            author_line("a1", "BIO", 2000, "United States"),
            author_line("a2", "BIO", 2001, "Germany"),
        ]
        .join("\n");
        let articles = article_line("p1", 2010, &["a1", "a2"], &["F"]);
        let (corpus, _) = parse(&articles, &authors, true).unwrap();
        let a = &corpus.articles[0];
        assert_eq!(a.cip_vec[1], 2);
        assert_eq!(a.n_cip(), 1);
        assert_eq!(a.region_vec, [1, 1, 0, 0]);
        assert_eq!(a.n_regions(), 2);
    }

    #[test]
    fn four_distinct_departments_give_n_cip_four() {
        let authors = [
            author_line("a1", "NEURO", 2000, "United States"),
            author_line("a2", "PSY", 2000, "United States"),
            author_line("a3", "BIO", 2000, "Japan"),
            author_line("a4", "ENG", 2000, "Japan"),
        ]
        .join("\n");
        let articles = article_line("p1", 2010, &["a1", "a2", "a3", "a4"], &["F", "A"]);
        let (corpus, _) = parse(&articles, &authors, true).unwrap();
        assert_eq!(corpus.articles[0].n_cip(), 4);
    }

    #[test]
    fn unmapped_mesh_is_skipped_and_tallied() {
        let authors = author_line("a1", "NEURO", 2000, "United States");
        let articles = article_line("p1", 2010, &["a1"], &["F", "D", "Z"]);
        let (corpus, report) = parse(&articles, &authors, false).unwrap();
        let a = &corpus.articles[0];
        assert_eq!(a.sa_vec, [1, 0, 0, 0, 0, 0]);
        assert_eq!(a.mesh_major_count, 1);
        assert_eq!(report.skipped_mesh.get("D"), Some(&1));
        assert_eq!(report.skipped_mesh.get("Z"), Some(&1));
    }

    #[test]
    fn all_unmapped_mesh_keeps_article_but_flags_it() {
        let authors = author_line("a1", "NEURO", 2000, "United States");
        let articles = article_line("p1", 2010, &["a1"], &["D"]);
        let (corpus, report) = parse(&articles, &authors, false).unwrap();
        assert!(!corpus.articles[0].has_sa());
        assert_eq!(report.articles_without_sa, 1);
    }

    #[test]
    fn unresolvable_author_rejects_record() {
        let authors = author_line("a1", "NEURO", 2000, "United States");
        let articles = article_line("p1", 2010, &["a1", "ghost"], &["F"]);
        let (corpus, report) = parse(&articles, &authors, false).unwrap();
        assert!(corpus.articles.is_empty());
        assert_eq!(report.record_errors.len(), 1);
        assert!(report.record_errors[0].message.contains("ghost"));
    }

    #[test]
    fn strict_mode_fails_on_any_rejected_record() {
        let authors = author_line("a1", "NEURO", 2000, "United States");
        let bad = article_line("p1", 2010, &["ghost"], &["F"]);
        assert!(matches!(parse(&bad, &authors, true), Err(Error::StrictIngest(1, _))));
    }

    #[test]
    fn negative_citations_is_a_schema_error() {
        let authors = author_line("a1", "NEURO", 2000, "United States");
        let articles = r#"{"article_id":"p1","year":2010,"citations":-1,"journal_id":"j1","author_ids":["a1"],"mesh_branches":["F"]}"#;
        let (_, report) = parse(articles, &authors, false).unwrap();
        assert_eq!(report.record_errors.len(), 1);
        assert!(report.record_errors[0].message.contains("negative"));
    }

    #[test]
    fn career_age_is_nonnegative_for_kept_records() {
        let authors = author_line("a1", "NEURO", 2012, "United States");
        let early = article_line("p1", 2010, &["a1"], &["F"]);
        let (corpus, report) = parse(&early, &authors, false).unwrap();
        assert!(corpus.articles.is_empty());
        assert_eq!(report.record_errors.len(), 1);

        let late = article_line("p1", 2015, &["a1"], &["F"]);
        let (corpus, _) = parse(&late, &authors, false).unwrap();
        assert_eq!(corpus.career_age("a1", corpus.articles[0].year), Some(3));
    }

    #[test]
    fn counts_match_recomputation() {
        let authors = [
            author_line("a1", "NEURO", 2000, "United States"),
            author_line("a2", "BIO", 2000, "Germany"),
        ]
        .join("\n");
        let articles = article_line("p1", 2010, &["a1", "a2"], &["F", "A", "G"]);
        let (corpus, _) = parse(&articles, &authors, true).unwrap();
        for a in &corpus.articles {
            assert_eq!(a.n_sa(), a.sa_vec.iter().filter(|&&c| c > 0).count());
            assert_eq!(a.n_cip(), a.cip_vec.iter().filter(|&&c| c > 0).count());
            assert_eq!(a.sa_vec.iter().sum::<u32>(), a.mesh_major_count);
            assert_eq!(a.cip_vec.iter().sum::<u32>() as usize, a.team_size());
        }
    }

    #[test]
    fn round_trip_preserves_derived_vectors() {
        let authors = [
            author_line("a1", "NEURO", 2000, "United States"),
            author_line("a2", "BIO", 2001, "Germany"),
            author_line("a3", "ENG", 2002, "Japan"),
        ]
        .join("\n");
        let articles = [
            article_line("p1", 2010, &["a1", "a2"], &["F", "A", "D"]),
            article_line("p2", 2011, &["a2", "a3"], &["C", "N", "J"]),
        ]
        .join("\n");
        let (corpus, _) = parse(&articles, &authors, false).unwrap();

        let mut article_bytes = Vec::new();
        corpus.write_articles(&mut article_bytes).unwrap();
        let mut author_bytes = Vec::new();
        corpus.write_authors(&mut author_bytes).unwrap();
        let (reparsed, report) = parse_corpus(
            Cursor::new(article_bytes),
            Cursor::new(author_bytes),
            &corpus.taxonomy,
            true,
        )
        .unwrap();
        assert!(report.record_errors.is_empty());
        assert_eq!(reparsed.articles, corpus.articles);
        assert_eq!(reparsed.authors, corpus.authors);
    }

    #[test]
    fn modal_region_breaks_ties_by_priority() {
        let mut a = ArticleRecord {
            article_id: "p".into(),
            year: 2010,
            citations: 0,
            journal_id: "j".into(),
            author_ids: vec!["a".into()],
            mesh_branches: vec![],
            sa_vec: [0; SA_DIM],
            cip_vec: [0; CIP_DIM],
            region_vec: [1, 1, 0, 0],
            mesh_major_count: 0,
        };
        assert_eq!(a.modal_region(), 1);
        a.region_vec = [0, 1, 2, 1];
        assert_eq!(a.modal_region(), 3);
        a.region_vec = [0, 0, 2, 2];
        assert_eq!(a.modal_region(), 3);
    }
}
