//! Deterministic synthetic-corpus generator with planted effects.
//!
//! Serves as the ground-truth oracle for the estimators: cross-domain
//! status is drawn from a logistic model in the publication year, and
//! log citations are drawn normal with planted premium terms entered in
//! scale units so the premium conversion inverts them directly. A single
//! seeded random stream with a fixed draw order makes the output
//! byte-reproducible.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    ArticleRecord, AuthorProfile, Corpus, TaxonomyMaps, CIP_DIM, REGION_DIM, SA_DIM,
};
use crate::error::{Error, Result};

/// Branch letters per SA category, used to emit MeSH terms that map back
/// onto the intended categories.
const SA_BRANCHES: [&[char]; SA_DIM] =
    [&['F'], &['A', 'B'], &['G'], &['C', 'N'], &['E'], &['J', 'L']];

/// Department code per CIP cluster in the bundled taxonomy.
const CIP_CODES: [&str; CIP_DIM] =
    ["NEURO", "BIO", "PSY", "BIOTECH", "MED", "HLTH", "PATH", "ENG", "PHYS"];

/// Countries per region in the bundled taxonomy.
const REGION_COUNTRIES: [&[&str]; REGION_DIM] = [
    &["United States", "Canada"],
    &["Germany", "United Kingdom", "France", "Netherlands"],
    &["China", "Japan", "Australia", "South Korea"],
    &["Brazil", "India", "Turkey", "South Africa"],
];

/// Generator parameters: population sizes, mixture weights, and planted
/// effects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub n_authors: usize,
    pub n_articles: usize,
    pub year_start: i32,
    pub year_end: i32,
    /// First year of the post period for the planted shift.
    pub boundary_year: i32,
    pub region_mix: [f64; REGION_DIM],
    pub cip_mix: [f64; CIP_DIM],
    pub sa_mix: [f64; SA_DIM],
    /// Fraction of articles that are solo-authored (always mono-domain).
    pub solo_fraction: f64,
    /// Team size is 2 plus a Poisson draw with this mean, capped.
    pub team_extra_mean: f64,
    pub team_size_cap: usize,
    /// Mapped term count is 1 plus a Poisson draw with this mean
    /// (cross-domain articles get at least 2).
    pub mesh_extra_mean: f64,
    pub n_journals: usize,
    /// Log odds of cross-domain status at the midpoint year.
    pub base_cross_log_odds: f64,
    /// Planted yearly log-odds slope for cross-domain status.
    pub yearly_cross_log_odds: f64,
    /// Planted citation premiums in scale units of `citation_scale`.
    pub gamma_sa: f64,
    pub gamma_cip: f64,
    pub gamma_joint: f64,
    /// Planted post-boundary shift of the cross-domain premium.
    pub delta_post: f64,
    /// Mean of ln(1+c) at the midpoint year.
    pub citation_base_mean: f64,
    /// Per-year drift of the log-citation mean.
    pub citation_trend: f64,
    /// Scale of the log-citation distribution.
    pub citation_scale: f64,
    /// Standard deviation of the per-author baseline added to team
    /// means.
    pub author_effect_sd: f64,
    /// First publication predates the author's earliest article by up to
    /// this many years.
    pub career_offset_max: i32,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            n_authors: 5_000,
            n_articles: 50_000,
            year_start: 2005,
            year_end: 2018,
            boundary_year: 2014,
            region_mix: [0.40, 0.30, 0.20, 0.10],
            cip_mix: [0.25, 0.15, 0.10, 0.08, 0.15, 0.08, 0.07, 0.07, 0.05],
            sa_mix: [0.25, 0.20, 0.15, 0.20, 0.12, 0.08],
            solo_fraction: 0.08,
            team_extra_mean: 1.0,
            team_size_cap: 8,
            mesh_extra_mean: 1.2,
            n_journals: 200,
            base_cross_log_odds: 0.0,
            yearly_cross_log_odds: 1.03f64.ln(),
            gamma_sa: 0.0,
            gamma_cip: 0.0,
            gamma_joint: 0.13,
            delta_post: -0.09,
            citation_base_mean: 2.5,
            citation_trend: 0.0,
            citation_scale: 1.24,
            author_effect_sd: 0.25,
            career_offset_max: 10,
            seed: 7,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_authors == 0 || self.n_articles == 0 {
            return Err(Error::Infeasible("need at least one author and article".into()));
        }
        if self.year_start > self.year_end {
            return Err(Error::Infeasible("year range is empty".into()));
        }
        if !(self.citation_scale > 0.0) {
            return Err(Error::Infeasible("citation_scale must be positive".into()));
        }
        if self.team_size_cap < 2 {
            return Err(Error::Infeasible("team_size_cap must allow pairs".into()));
        }
        if !(0.0..=1.0).contains(&self.solo_fraction) {
            return Err(Error::Infeasible("solo_fraction must be a probability".into()));
        }
        for (name, mix) in [
            ("region_mix", &self.region_mix[..]),
            ("cip_mix", &self.cip_mix[..]),
            ("sa_mix", &self.sa_mix[..]),
        ] {
            if mix.iter().any(|&p| p < 0.0) {
                return Err(Error::Infeasible(format!("{name} has a negative weight")));
            }
            let total: f64 = mix.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::Infeasible(format!("{name} sums to {total}, expected 1")));
            }
        }
        Ok(())
    }
}

/// Planted values and realized tallies, written beside a generated
/// corpus so estimator checks can close the loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleRecord {
    pub params: SynthParams,
    pub n_cross: usize,
    pub n_mono: usize,
    pub n_solo: usize,
    pub mean_team_size: f64,
    pub mean_citations: f64,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// The taxonomy bundled with generated corpora.
pub fn synth_taxonomy() -> TaxonomyMaps {
    let cip = CIP_CODES
        .iter()
        .enumerate()
        .map(|(i, &code)| (code.to_string(), (i + 1) as u8))
        .collect();
    let country = REGION_COUNTRIES
        .iter()
        .enumerate()
        .flat_map(|(r, countries)| {
            countries.iter().map(move |&c| (c.to_string(), (r + 1) as u8))
        })
        .collect();
    TaxonomyMaps::new(TaxonomyMaps::default_mesh_map(), cip, country)
        .expect("bundled taxonomy is valid")
}

struct DraftAuthor {
    cip: usize,    // 0-based
    region: usize, // 0-based
    alpha: f64,
}

/// Generate a corpus with planted effects and the matching oracle
/// record. The same parameters and seed always produce a byte-identical
/// corpus.
pub fn generate(params: &SynthParams) -> Result<(Corpus, OracleRecord)> {
    params.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);

    let region_pick = WeightedIndex::new(params.region_mix)
        .map_err(|e| Error::Infeasible(format!("region_mix: {e}")))?;
    let cip_pick = WeightedIndex::new(params.cip_mix)
        .map_err(|e| Error::Infeasible(format!("cip_mix: {e}")))?;
    let sa_pick = WeightedIndex::new(params.sa_mix)
        .map_err(|e| Error::Infeasible(format!("sa_mix: {e}")))?;
    let alpha_dist = Normal::new(0.0, params.author_effect_sd.max(f64::MIN_POSITIVE))
        .expect("valid normal");
    let noise_dist = Normal::new(0.0, params.citation_scale).expect("valid normal");
    let team_extra = Poisson::new(params.team_extra_mean.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::Infeasible(format!("team_extra_mean: {e}")))?;
    let mesh_extra = Poisson::new(params.mesh_extra_mean.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::Infeasible(format!("mesh_extra_mean: {e}")))?;

    // authors, one weighted draw each for cip/region/country/alpha
    let mut drafts = Vec::with_capacity(params.n_authors);
    let mut cip_pools: Vec<Vec<usize>> = vec![Vec::new(); CIP_DIM];
    for idx in 0..params.n_authors {
        let cip = cip_pick.sample(&mut rng);
        let region = region_pick.sample(&mut rng);
        let alpha: f64 = alpha_dist.sample(&mut rng);
        cip_pools[cip].push(idx);
        drafts.push(DraftAuthor { cip, region, alpha });
    }
    for (cip, pool) in cip_pools.iter().enumerate() {
        if params.cip_mix[cip] > 0.0 && pool.len() < params.team_size_cap {
            return Err(Error::Infeasible(format!(
                "cip pool {} holds {} authors, below the team size cap {}",
                cip + 1,
                pool.len(),
                params.team_size_cap
            )));
        }
    }

    let year_span = params.year_end - params.year_start;
    let mid_year = f64::from(params.year_start + params.year_end) / 2.0;
    let mesh_map = TaxonomyMaps::default_mesh_map();
    let mut articles = Vec::with_capacity(params.n_articles);
    let mut first_year: Vec<Option<i32>> = vec![None; params.n_authors];
    let mut n_cross = 0usize;
    let mut n_solo = 0usize;
    let mut team_total = 0usize;
    let mut citation_total = 0f64;

    for j in 0..params.n_articles {
        let year = params.year_start + rng.random_range(0..=year_span);
        let solo = params.solo_fraction > 0.0 && rng.random_bool(params.solo_fraction);
        let team_size = if solo {
            1
        } else {
            let extra = team_extra.sample(&mut rng) as usize;
            (2 + extra).min(params.team_size_cap)
        };
        let cross = if solo {
            false
        } else {
            let odds = params.base_cross_log_odds
                + params.yearly_cross_log_odds * (f64::from(year) - mid_year);
            rng.random_bool(sigmoid(odds))
        };

        // team assembly: one home discipline, cross teams split over two
        let mut member_ids: Vec<usize> = Vec::with_capacity(team_size);
        if cross {
            let c1 = cip_pick.sample(&mut rng);
            let c2 = loop {
                let c = cip_pick.sample(&mut rng);
                if c != c1 {
                    break c;
                }
            };
            let k1 = 1 + rng.random_range(0..team_size - 1);
            let k2 = team_size - k1;
            for pick in rand::seq::index::sample(&mut rng, cip_pools[c1].len(), k1) {
                member_ids.push(cip_pools[c1][pick]);
            }
            for pick in rand::seq::index::sample(&mut rng, cip_pools[c2].len(), k2) {
                member_ids.push(cip_pools[c2][pick]);
            }
        } else {
            let c = cip_pick.sample(&mut rng);
            for pick in rand::seq::index::sample(&mut rng, cip_pools[c].len(), team_size) {
                member_ids.push(cip_pools[c][pick]);
            }
        }

        // mapped major terms: mono articles stay within one category
        let mut letters: Vec<char> = Vec::new();
        let n_terms;
        if cross {
            let s1 = sa_pick.sample(&mut rng);
            let s2 = loop {
                let s = sa_pick.sample(&mut rng);
                if s != s1 {
                    break s;
                }
            };
            n_terms = (1 + mesh_extra.sample(&mut rng) as usize).max(2);
            let b1 = SA_BRANCHES[s1];
            let b2 = SA_BRANCHES[s2];
            letters.push(b1[rng.random_range(0..b1.len())]);
            letters.push(b2[rng.random_range(0..b2.len())]);
            for _ in 2..n_terms {
                let from_first = rng.random_bool(0.5);
                let b = if from_first { b1 } else { b2 };
                letters.push(b[rng.random_range(0..b.len())]);
            }
        } else {
            let s = sa_pick.sample(&mut rng);
            n_terms = 1 + mesh_extra.sample(&mut rng) as usize;
            let b = SA_BRANCHES[s];
            for _ in 0..n_terms {
                letters.push(b[rng.random_range(0..b.len())]);
            }
        }

        let journal = rng.random_range(0..params.n_journals);

        // planted citation model in log space
        let post = year >= params.boundary_year;
        let premium_z = if cross {
            params.gamma_sa
                + params.gamma_cip
                + params.gamma_joint
                + if post { params.delta_post } else { 0.0 }
        } else {
            0.0
        };
        let team_alpha =
            member_ids.iter().map(|&m| drafts[m].alpha).sum::<f64>() / team_size as f64;
        let log_c = params.citation_base_mean
            + params.citation_trend * (f64::from(year) - mid_year)
            + params.citation_scale * premium_z
            + team_alpha
            + noise_dist.sample(&mut rng);
        let citations = log_c.exp_m1().round().max(0.0).min(f64::from(u32::MAX)) as u32;

        // derive count vectors the same way ingestion does
        let mut sa_vec = [0u32; SA_DIM];
        for &l in &letters {
            sa_vec[usize::from(mesh_map[&l]) - 1] += 1;
        }
        let mut cip_vec = [0u32; CIP_DIM];
        let mut region_vec = [0u32; REGION_DIM];
        for &m in &member_ids {
            cip_vec[drafts[m].cip] += 1;
            region_vec[drafts[m].region] += 1;
        }
        for &m in &member_ids {
            first_year[m] = Some(first_year[m].map_or(year, |y| y.min(year)));
        }

        if cross {
            n_cross += 1;
        }
        if solo {
            n_solo += 1;
        }
        team_total += team_size;
        citation_total += f64::from(citations);

        articles.push(ArticleRecord {
            article_id: format!("p{j:06}"),
            year,
            citations,
            journal_id: format!("j{journal:04}"),
            author_ids: member_ids.iter().map(|&m| format!("a{m:06}")).collect(),
            mesh_branches: letters,
            sa_vec,
            cip_vec,
            region_vec,
            mesh_major_count: n_terms as u32,
        });
    }

    // career starts: at or before the earliest publication, drawn last so
    // the article stream above is independent of this pass
    let mut authors = BTreeMap::new();
    for (idx, draft) in drafts.iter().enumerate() {
        let offset = rng.random_range(0..=params.career_offset_max.max(0));
        let anchor = first_year[idx].unwrap_or(params.year_start);
        authors.insert(
            format!("a{idx:06}"),
            AuthorProfile {
                author_id: format!("a{idx:06}"),
                cip_cluster: (draft.cip + 1) as u8,
                first_pub_year: anchor - offset,
                region: (draft.region + 1) as u8,
            },
        );
    }
    let corpus = Corpus { articles, authors, taxonomy: synth_taxonomy() };
    let oracle = OracleRecord {
        params: params.clone(),
        n_cross,
        n_mono: params.n_articles - n_cross,
        n_solo,
        mean_team_size: team_total as f64 / params.n_articles as f64,
        mean_citations: citation_total / params.n_articles as f64,
    };
    Ok((corpus, oracle))
}
