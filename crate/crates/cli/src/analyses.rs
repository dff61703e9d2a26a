//! Analysis emitters: compute one analysis and write its long-format CSV
//! (and JSON where a summary object fits better). The report command
//! chains all of them over one corpus.

use serde::Serialize;
use xsci_core::{
    aggregate_cooccurrence, bipartite, build_fe_design, build_logit_design, category_count_fractions,
    classify_config, classify_joint, did_report, diversity, diversity_timeseries, fit_fe_ols,
    fit_logit, journal_mean_impact, mst, network_difference, normalize_citations, prune,
    shift_matrix, shuffle_baseline, supergroup_interfaces, sa_breadth_by_cip_count, BipartiteMatrix,
    BipartiteNorm, CitationNormalization, ConfigSpec, Corpus, FitResult, IngestReport, MatrixKind,
    OracleRecord, SubsetTag, SupergroupPartition, Taxon, XDefinition, XTaxon, XmLabel, YearWindow,
    ZGroup,
};

use crate::output::{fmt_f64, fmt_opt, OutDir};
use crate::CliError;

pub fn emit_ingest(out: &OutDir, corpus: &Corpus, report: &IngestReport) -> Result<(), CliError> {
    out.write_json("ingest_report.json", report)?;
    let mut articles = Vec::new();
    corpus
        .write_articles(&mut articles)
        .map_err(|e| CliError::Data(e.to_string()))?;
    out.write_bytes("articles.jsonl", &articles)?;
    let mut authors = Vec::new();
    corpus
        .write_authors(&mut authors)
        .map_err(|e| CliError::Data(e.to_string()))?;
    out.write_bytes("authors.jsonl", &authors)?;
    corpus
        .taxonomy
        .write_dir(&out.path("taxonomy"))
        .map_err(|e| CliError::Data(e.to_string()))?;
    println!(
        "ingested {} articles ({} rejected), {} authors",
        report.articles_kept,
        report.record_errors.len(),
        report.authors_kept
    );
    Ok(())
}

/// Corpus files as the generator writes them: raw records plus taxonomy
/// and the oracle.
pub fn emit_corpus_files(
    out: &OutDir,
    corpus: &Corpus,
    oracle: &OracleRecord,
) -> Result<(), CliError> {
    let mut articles = Vec::new();
    corpus
        .write_articles(&mut articles)
        .map_err(|e| CliError::Data(e.to_string()))?;
    out.write_bytes("articles.jsonl", &articles)?;
    let mut authors = Vec::new();
    corpus
        .write_authors(&mut authors)
        .map_err(|e| CliError::Data(e.to_string()))?;
    out.write_bytes("authors.jsonl", &authors)?;
    corpus
        .taxonomy
        .write_dir(&out.path("taxonomy"))
        .map_err(|e| CliError::Data(e.to_string()))?;
    out.write_json("oracle.json", oracle)?;
    println!(
        "generated {} articles / {} authors ({} cross, {} solo)",
        corpus.articles.len(),
        corpus.authors.len(),
        oracle.n_cross,
        oracle.n_solo
    );
    Ok(())
}

fn label_str(label: Option<XmLabel>) -> &'static str {
    match label {
        Some(XmLabel::X) => "X",
        Some(XmLabel::M) => "M",
        Some(XmLabel::Excluded) => "excluded",
        None => "unclassified",
    }
}

pub fn emit_classify(
    out: &OutDir,
    corpus: &Corpus,
    sa_spec: &ConfigSpec,
    cip_spec: &ConfigSpec,
) -> Result<(), CliError> {
    let mut rows = Vec::with_capacity(corpus.articles.len() * 3);
    let mut counts: std::collections::BTreeMap<(&str, &str), usize> = Default::default();
    for article in &corpus.articles {
        let sa = if article.has_sa() {
            Some(classify_config(&article.sa_vec, sa_spec)?)
        } else {
            None
        };
        let cip = Some(classify_config(&article.cip_vec, cip_spec)?);
        let joint = sa.map(|s| classify_joint(s, cip.unwrap()));
        for (taxon, label) in [("sa", sa), ("cip", cip), ("joint", joint)] {
            let text = label_str(label);
            *counts.entry((taxon, text)).or_insert(0) += 1;
            rows.push(vec![article.article_id.clone(), taxon.into(), text.into()]);
        }
    }
    out.write_csv("labels.csv", &["article_id", "taxon", "value"], &rows)?;
    let summary: Vec<Vec<String>> = counts
        .into_iter()
        .map(|((taxon, label), n)| vec![taxon.into(), label.into(), n.to_string()])
        .collect();
    out.write_csv("classify_summary.csv", &["taxon", "label", "value"], &summary)
}

#[derive(Serialize)]
struct ZscoreSummary {
    sigma_mean: f64,
    n_cohorts: usize,
    degenerate_years: Vec<i32>,
}

pub fn emit_zscore(
    out: &OutDir,
    corpus: &Corpus,
    window: YearWindow,
) -> Result<CitationNormalization, CliError> {
    let norm = normalize_citations(corpus, window)?;
    let mut rows = Vec::new();
    for cohort in &norm.cohorts {
        let year = cohort.year.to_string();
        rows.push(vec![year.clone(), "n".into(), cohort.n.to_string()]);
        rows.push(vec![year.clone(), "mean_log".into(), fmt_f64(cohort.mean_log)]);
        rows.push(vec![year, "sd_log".into(), fmt_f64(cohort.sd_log)]);
    }
    out.write_csv("cohorts.csv", &["year", "stat", "value"], &rows)?;
    out.write_json(
        "zscore_summary.json",
        &ZscoreSummary {
            sigma_mean: norm.sigma_mean,
            n_cohorts: norm.cohorts.len(),
            degenerate_years: norm.degenerate_years.clone(),
        },
    )?;
    Ok(norm)
}

fn taxon_vec(article: &xsci_core::ArticleRecord, taxon: Taxon) -> &[u32] {
    match taxon {
        Taxon::Sa => &article.sa_vec,
        Taxon::Cip => &article.cip_vec,
    }
}

pub fn emit_diversity(
    out: &OutDir,
    corpus: &Corpus,
    taxon: Taxon,
    collapse: Option<&xsci_core::CollapseSpec>,
) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for article in &corpus.articles {
        let vec = taxon_vec(article, taxon);
        let collapsed = match collapse {
            Some(spec) => spec.apply(vec)?,
            None => vec.to_vec(),
        };
        if collapsed.iter().all(|&c| c == 0) {
            continue;
        }
        let (_, f_d) = diversity(&collapsed, None)?;
        rows.push(vec![article.article_id.clone(), fmt_f64(f_d)]);
    }
    out.write_csv(&format!("diversity_{}.csv", taxon.name()), &["article_id", "value"], &rows)
}

fn region_label(region: Option<u8>) -> &'static str {
    match region {
        None => "all",
        Some(1) => "na",
        Some(2) => "eu",
        Some(3) => "aa",
        _ => "world",
    }
}

/// Aggregate co-occurrence per region and period plus the
/// volume-corrected shift between the periods.
pub fn emit_cooccur(
    out: &OutDir,
    corpus: &Corpus,
    taxon: Taxon,
    kind: MatrixKind,
    collapse: Option<&xsci_core::CollapseSpec>,
    window: YearWindow,
    boundary: i32,
) -> Result<(), CliError> {
    let pre = YearWindow::new(window.start, boundary - 1).map_err(|e| CliError::Usage(e.to_string()))?;
    let post = YearWindow::new(boundary, window.end).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut matrix_rows = Vec::new();
    let mut shift_rows = Vec::new();
    for region in [None, Some(1u8), Some(2), Some(3), Some(4)] {
        let collect = |period: YearWindow| {
            let vecs: Vec<&[u32]> = corpus
                .articles
                .iter()
                .filter(|a| period.contains(a.year))
                .filter(|a| region.is_none_or(|r| a.modal_region() == r))
                .filter(|a| taxon != Taxon::Sa || a.has_sa())
                .map(|a| taxon_vec(a, taxon))
                .collect();
            aggregate_cooccurrence(vecs, taxon.dim(), kind, collapse)
        };
        let (pre_matrix, n_pre) = collect(pre)?;
        let (post_matrix, n_post) = collect(post)?;
        for (period, matrix) in [("pre", &pre_matrix), ("post", &post_matrix)] {
            for (i, j, w) in matrix.entries() {
                matrix_rows.push(vec![
                    region_label(region).to_string(),
                    period.to_string(),
                    (i + 1).to_string(),
                    (j + 1).to_string(),
                    fmt_f64(w),
                ]);
            }
        }
        if n_pre > 0 {
            let shift = shift_matrix(&pre_matrix, &post_matrix, n_pre, n_post)?;
            for (i, j, v) in shift.entries() {
                shift_rows.push(vec![
                    region_label(region).to_string(),
                    (i + 1).to_string(),
                    (j + 1).to_string(),
                    fmt_opt(v),
                ]);
            }
        }
    }
    out.write_csv(
        &format!("cooccur_{}.csv", taxon.name()),
        &["region", "period", "i", "j", "value"],
        &matrix_rows,
    )?;
    out.write_csv(
        &format!("shift_{}.csv", taxon.name()),
        &["region", "i", "j", "value"],
        &shift_rows,
    )
}

pub fn emit_timeseries(
    out: &OutDir,
    corpus: &Corpus,
    taxon: Taxon,
    collapse: Option<&xsci_core::CollapseSpec>,
    deflate: bool,
) -> Result<(), CliError> {
    let series = diversity_timeseries(corpus, taxon, collapse, deflate)?;
    let mut rows = Vec::new();
    for s in &series {
        for p in &s.points {
            let region = region_label(s.region).to_string();
            let year = p.year.to_string();
            rows.push(vec![region.clone(), year.clone(), "n".into(), p.n.to_string()]);
            rows.push(vec![region.clone(), year.clone(), "raw_mean".into(), fmt_f64(p.raw_mean)]);
            rows.push(vec![region.clone(), year.clone(), "deflator".into(), fmt_f64(p.deflator)]);
            rows.push(vec![region, year, "deflated".into(), fmt_f64(p.deflated)]);
        }
    }
    out.write_csv(
        &format!("timeseries_{}.csv", taxon.name()),
        &["region", "year", "stat", "value"],
        &rows,
    )
}

pub fn emit_fractions(
    out: &OutDir,
    corpus: &Corpus,
    taxon: Taxon,
    window: YearWindow,
) -> Result<(), CliError> {
    let norm = normalize_citations(corpus, window)?;
    let rows_data = category_count_fractions(corpus, taxon, &norm)?;
    let mut rows = Vec::new();
    for r in &rows_data {
        rows.push(vec![
            r.year.to_string(),
            r.group.name().into(),
            r.n_categories.to_string(),
            "fraction".into(),
            fmt_f64(r.fraction),
        ]);
    }
    // one cell-size row per (year, group)
    let mut seen = std::collections::BTreeSet::new();
    for r in &rows_data {
        if seen.insert((r.year, r.group)) {
            rows.push(vec![
                r.year.to_string(),
                r.group.name().into(),
                String::new(),
                "cell_size".into(),
                r.cell_size.to_string(),
            ]);
        }
    }
    out.write_csv(
        &format!("fractions_{}.csv", taxon.name()),
        &["year", "group", "n_categories", "stat", "value"],
        &rows,
    )
}

fn bipartite_rows(matrix: &BipartiteMatrix, name: &str, rows: &mut Vec<Vec<String>>) {
    for (cip, sa, v) in matrix.entries() {
        rows.push(vec![
            name.to_string(),
            (cip + 1).to_string(),
            (sa + 1).to_string(),
            fmt_f64(v),
        ]);
    }
}

pub fn emit_bipartite(
    out: &OutDir,
    corpus: &Corpus,
    norm: BipartiteNorm,
    sa_spec: &ConfigSpec,
    cip_spec: &ConfigSpec,
) -> Result<(), CliError> {
    let (mono, n_mono, warn_mono) = bipartite(corpus, SubsetTag::Mono, norm, sa_spec, cip_spec)?;
    let (cross, n_cross, warn_cross) =
        bipartite(corpus, SubsetTag::Cross, norm, sa_spec, cip_spec)?;
    if warn_mono || warn_cross {
        eprintln!("warning: empty bipartite subset (mono {n_mono}, cross {n_cross})");
    }
    let mut rows = Vec::new();
    bipartite_rows(&mono, "mono", &mut rows);
    bipartite_rows(&cross, "cross", &mut rows);
    out.write_csv("bipartite.csv", &["subset", "cip", "sa", "value"], &rows)
}

pub fn emit_delta(
    out: &OutDir,
    corpus: &Corpus,
    norm: BipartiteNorm,
    sa_spec: &ConfigSpec,
    cip_spec: &ConfigSpec,
) -> Result<(), CliError> {
    let (mono, _, _) = bipartite(corpus, SubsetTag::Mono, norm, sa_spec, cip_spec)?;
    let (cross, _, _) = bipartite(corpus, SubsetTag::Cross, norm, sa_spec, cip_spec)?;
    let mono_pruned = prune(&mono);
    let cross_pruned = prune(&cross);
    let delta = network_difference(&cross_pruned, &mono_pruned);
    let mut rows = Vec::new();
    bipartite_rows(&mono_pruned, "mono_pruned", &mut rows);
    bipartite_rows(&cross_pruned, "cross_pruned", &mut rows);
    bipartite_rows(&delta, "delta", &mut rows);
    out.write_csv("delta.csv", &["matrix", "cip", "sa", "value"], &rows)
}

pub fn emit_mst(
    out: &OutDir,
    corpus: &Corpus,
    taxon: Taxon,
    kind: MatrixKind,
    window: YearWindow,
) -> Result<(), CliError> {
    let vecs: Vec<&[u32]> = corpus
        .articles
        .iter()
        .filter(|a| window.contains(a.year))
        .filter(|a| taxon != Taxon::Sa || a.has_sa())
        .map(|a| taxon_vec(a, taxon))
        .collect();
    let (aggregate, _) = aggregate_cooccurrence(vecs, taxon.dim(), kind, None)?;
    let (edges, components, warn) = mst(&aggregate);
    if warn {
        eprintln!("warning: co-occurrence graph is disconnected ({components} components)");
    }
    let rows: Vec<Vec<String>> = edges
        .iter()
        .map(|e| vec![e.a.to_string(), e.b.to_string(), fmt_f64(e.weight)])
        .collect();
    out.write_csv(&format!("mst_{}.csv", taxon.name()), &["a", "b", "value"], &rows)
}

pub fn emit_interfaces(
    out: &OutDir,
    corpus: &Corpus,
    p1: YearWindow,
    p2: YearWindow,
) -> Result<(), CliError> {
    let rows_data = supergroup_interfaces(corpus, &SupergroupPartition::default(), p1, p2)?;
    let mut rows = Vec::new();
    for r in &rows_data {
        let combo = r
            .combo
            .iter()
            .map(|g| g.name())
            .collect::<Vec<_>>()
            .join("+");
        let mut push = |stat: &str, value: String| {
            rows.push(vec![combo.clone(), stat.to_string(), value]);
        };
        push("n1", r.n1.to_string());
        push("x1", r.x1.to_string());
        push("p1", fmt_f64(r.p1));
        push("n2", r.n2.to_string());
        push("x2", r.x2.to_string());
        push("p2", fmt_f64(r.p2));
        push("pct_change", fmt_opt(r.pct_change));
        push("z", fmt_f64(r.z));
        push("p_value", fmt_f64(r.p_value));
    }
    out.write_csv("interfaces.csv", &["combo", "stat", "value"], &rows)
}

pub fn emit_breadth(
    out: &OutDir,
    corpus: &Corpus,
    filter: Option<&(ConfigSpec, ConfigSpec)>,
    z_side: Option<ZGroup>,
    window: YearWindow,
) -> Result<(), CliError> {
    let norm_owned;
    let z_split = match z_side {
        Some(side) => {
            norm_owned = normalize_citations(corpus, window)?;
            Some((&norm_owned, side))
        }
        None => None,
    };
    let rows_data = sa_breadth_by_cip_count(
        corpus,
        filter.map(|(sa, cip)| (sa, cip)),
        z_split,
    )?;
    let mut rows = Vec::new();
    for r in &rows_data {
        rows.push(vec![r.n_cip.to_string(), "mean_n_sa".into(), fmt_f64(r.mean_n_sa)]);
        rows.push(vec![r.n_cip.to_string(), "n_articles".into(), r.n_articles.to_string()]);
    }
    out.write_csv("breadth.csv", &["n_cip", "stat", "value"], &rows)
}

#[derive(Serialize)]
struct FitJson<'a> {
    model: &'a xsci_core::econ::ModelKind,
    n_obs: usize,
    n_clusters: usize,
    stats: &'a xsci_core::econ::FitStats,
    dropped: &'a [xsci_core::econ::DroppedColumn],
}

fn write_fit(out: &OutDir, prefix: &str, fit: &FitResult) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for t in &fit.terms {
        let mut push = |stat: &str, value: String| {
            rows.push(vec![t.name.clone(), stat.to_string(), value]);
        };
        push("estimate", fmt_f64(t.estimate));
        if let Some(or) = t.odds_ratio {
            push("odds_ratio", fmt_f64(or));
        }
        push("std_err", fmt_f64(t.std_err));
        push("statistic", fmt_f64(t.statistic));
        push("p_value", fmt_f64(t.p_value));
    }
    out.write_csv(&format!("{prefix}coefficients.csv"), &["term", "stat", "value"], &rows)?;
    out.write_json(
        &format!("{prefix}fit.json"),
        &FitJson {
            model: &fit.model,
            n_obs: fit.n_obs,
            n_clusters: fit.n_clusters,
            stats: &fit.stats,
            dropped: &fit.dropped,
        },
    )
}

pub fn emit_logit(
    out: &OutDir,
    corpus: &Corpus,
    xdef: &XDefinition,
    did: bool,
    window: YearWindow,
    boundary: i32,
    prefix: &str,
) -> Result<(), CliError> {
    let norm = normalize_citations(corpus, window)?;
    let journals = journal_mean_impact(corpus, &norm);
    let design = build_logit_design(corpus, xdef, did, &norm, &journals, window, boundary)?;
    let fit = fit_logit(&design)?;
    println!(
        "logit {}: n={} clusters={} pseudo_r2={:.4}",
        xdef.taxon.name(),
        fit.n_obs,
        fit.n_clusters,
        fit.stats.pseudo_r_squared.unwrap_or(f64::NAN)
    );
    write_fit(out, prefix, &fit)
}

pub fn emit_fe(
    out: &OutDir,
    corpus: &Corpus,
    xdef: &XDefinition,
    did: bool,
    window: YearWindow,
    boundary: i32,
    prefix: &str,
) -> Result<(), CliError> {
    let norm = normalize_citations(corpus, window)?;
    let design = build_fe_design(corpus, xdef, did, &norm, window, boundary)?;
    let fit = fit_fe_ols(&design)?;
    println!(
        "fe {}: n={} profiles={} r2_within={:.4}",
        xdef.taxon.name(),
        fit.n_obs,
        fit.stats.n_profiles.unwrap_or(0),
        fit.stats.r_squared_within.unwrap_or(f64::NAN)
    );
    write_fit(out, prefix, &fit)?;
    if did {
        let indicator = xdef.indicator_name();
        let interaction = format!("{indicator}_x_post");
        let report = did_report(&fit, &indicator, &interaction, norm.sigma_mean)?;
        let rows = vec![
            vec!["pre_effect".to_string(), fmt_f64(report.pre_effect)],
            vec!["pre_se".to_string(), fmt_f64(report.pre_se)],
            vec!["post_effect".to_string(), fmt_f64(report.post_effect)],
            vec!["post_se".to_string(), fmt_f64(report.post_se)],
            vec!["sigma_bar".to_string(), fmt_f64(report.sigma_bar)],
            vec!["pre_premium".to_string(), fmt_f64(report.pre_premium)],
            vec!["post_premium".to_string(), fmt_f64(report.post_premium)],
        ];
        out.write_csv(&format!("{prefix}premiums.csv"), &["stat", "value"], &rows)?;
    }
    Ok(())
}

/// Shuffled-counts baseline: the shift matrix of the randomized corpus.
pub fn emit_baseline_shift(
    out: &OutDir,
    corpus: &Corpus,
    taxon: Taxon,
    seed: u64,
    window: YearWindow,
    boundary: i32,
) -> Result<(), CliError> {
    let shuffled = shuffle_baseline(corpus, seed);
    let pre = YearWindow::new(window.start, boundary - 1).map_err(|e| CliError::Usage(e.to_string()))?;
    let post = YearWindow::new(boundary, window.end).map_err(|e| CliError::Usage(e.to_string()))?;
    let collect = |period: YearWindow| {
        let vecs: Vec<&[u32]> = shuffled
            .articles
            .iter()
            .filter(|a| period.contains(a.year))
            .filter(|a| taxon != Taxon::Sa || a.has_sa())
            .map(|a| taxon_vec(a, taxon))
            .collect();
        aggregate_cooccurrence(vecs, taxon.dim(), MatrixKind::OffDiagonal, None)
    };
    let (pre_matrix, n_pre) = collect(pre)?;
    let (post_matrix, n_post) = collect(post)?;
    let mut rows = Vec::new();
    if n_pre > 0 {
        let shift = shift_matrix(&pre_matrix, &post_matrix, n_pre, n_post)?;
        for (i, j, v) in shift.entries() {
            rows.push(vec![(i + 1).to_string(), (j + 1).to_string(), fmt_opt(v)]);
        }
    }
    out.write_csv(&format!("baseline_shift_{}.csv", taxon.name()), &["i", "j", "value"], &rows)
}

/// The full analysis suite over one corpus.
#[allow(clippy::too_many_arguments)]
pub fn emit_report(
    out: &OutDir,
    corpus: &Corpus,
    report: &IngestReport,
    sa_spec: &ConfigSpec,
    cip_spec: &ConfigSpec,
    window: YearWindow,
    boundary: i32,
    seed: u64,
) -> Result<(), CliError> {
    out.write_json("ingest_report.json", report)?;
    emit_classify(out, corpus, sa_spec, cip_spec)?;
    emit_zscore(out, corpus, window)?;
    for taxon in [Taxon::Sa, Taxon::Cip] {
        emit_diversity(out, corpus, taxon, None)?;
        emit_cooccur(out, corpus, taxon, MatrixKind::OffDiagonal, None, window, boundary)?;
        emit_timeseries(out, corpus, taxon, None, true)?;
        emit_fractions(out, corpus, taxon, window)?;
        emit_mst(out, corpus, taxon, MatrixKind::OffDiagonal, window)?;
        emit_baseline_shift(out, corpus, taxon, seed, window, boundary)?;
    }
    emit_bipartite(out, corpus, BipartiteNorm::UnitMass, sa_spec, cip_spec)?;
    emit_delta(out, corpus, BipartiteNorm::UnitMass, sa_spec, cip_spec)?;
    emit_interfaces(
        out,
        corpus,
        YearWindow::new(1999, 2008).map_err(|e| CliError::Usage(e.to_string()))?,
        YearWindow::new(2009, 2018).map_err(|e| CliError::Usage(e.to_string()))?,
    )?;
    emit_breadth(out, corpus, Some(&(sa_spec.clone(), cip_spec.clone())), None, window)?;

    let xdef = XDefinition::new(XTaxon::Joint, sa_spec.clone(), cip_spec.clone())
        .map_err(|e| CliError::Data(e.to_string()))?;
    emit_logit(out, corpus, &xdef, false, window, boundary, "logit_")?;
    emit_logit(out, corpus, &xdef, true, window, boundary, "logit_did_")?;
    emit_fe(out, corpus, &xdef, false, window, boundary, "fe_")?;
    emit_fe(out, corpus, &xdef, true, window, boundary, "fe_did_")?;
    Ok(())
}
