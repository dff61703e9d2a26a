//! Subcommand dispatch: input loading, manifest writing, and calls into
//! the analysis emitters.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use xsci_core::{
    parse_corpus, synth, ConfigSpec, Corpus, IngestReport, SynthParams, Taxon, TaxonomyMaps,
    XDefinition, XTaxon, YearWindow,
};

use crate::analyses;
use crate::output::{Manifest, OutDir};
use crate::{
    Cli, CliError, Command, InputArgs, MetricsCmd, NetworksCmd, RegressCmd, XTaxonArg, ZSideArg,
};

pub fn run(cli: Cli) -> Result<(), CliError> {
    if !cli.window.contains(cli.boundary) {
        return Err(CliError::Usage(format!(
            "boundary year {} lies outside the analysis window {}:{}",
            cli.boundary, cli.window.start, cli.window.end
        )));
    }
    let window = cli.window;
    let boundary = cli.boundary;
    let seed = cli.seed;
    let strict = cli.strict;
    let out_path = cli.out.clone();

    let manifest = |command: String,
                    inputs: BTreeMap<String, String>,
                    options: BTreeMap<String, String>| Manifest {
        tool: "xsci",
        version: env!("CARGO_PKG_VERSION"),
        command,
        inputs,
        options,
        window: format!("{}:{}", window.start, window.end),
        boundary,
        seed,
        strict,
    };

    match cli.command {
        Command::Ingest { inputs } => {
            let (corpus, report) = load_corpus(&inputs, strict)?;
            let out = OutDir::create(&out_path)?;
            manifest("ingest".into(), inputs_map(&inputs), BTreeMap::new()).write(&out)?;
            analyses::emit_ingest(&out, &corpus, &report)
        }
        Command::Classify { inputs, config } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let (sa_spec, cip_spec) = load_config_pair(&config)?;
            let out = OutDir::create(&out_path)?;
            manifest(
                "classify".into(),
                inputs_map(&inputs),
                crate::options_map(&[("config", config.clone())]),
            )
            .write(&out)?;
            analyses::emit_classify(&out, &corpus, &sa_spec, &cip_spec)
        }
        Command::Metrics { cmd } => run_metrics(cmd, window, boundary, strict, &out_path, manifest),
        Command::Networks { cmd } => run_networks(cmd, window, boundary, strict, &out_path, manifest),
        Command::Regress { cmd } => {
            let (name, args) = match cmd {
                RegressCmd::Logit { args } => ("logit", args),
                RegressCmd::Fe { args } => ("fe", args),
            };
            let (corpus, _) = load_corpus(&args.inputs, strict)?;
            let xdef = xdef_from(&args.x, args.taxon)?;
            let out = OutDir::create(&out_path)?;
            manifest(
                format!("regress {name}"),
                inputs_map(&args.inputs),
                crate::options_map(&[
                    ("x", args.x.clone()),
                    ("taxon", xdef.taxon.name().to_string()),
                    ("did", args.did.to_string()),
                ]),
            )
            .write(&out)?;
            match name {
                "logit" => analyses::emit_logit(&out, &corpus, &xdef, args.did, window, boundary, ""),
                _ => analyses::emit_fe(&out, &corpus, &xdef, args.did, window, boundary, ""),
            }
        }
        Command::Synth { params } => {
            let mut p = match &params {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|_| {
                        CliError::Usage(format!("missing params file {}", path.display()))
                    })?;
                    toml::from_str::<SynthParams>(&text)
                        .map_err(|e| CliError::Data(format!("bad params file: {e}")))?
                }
                None => SynthParams::default(),
            };
            if let Some(s) = seed {
                p.seed = s;
            }
            let (corpus, oracle) = synth::generate(&p)?;
            let out = OutDir::create(&out_path)?;
            manifest(
                "synth".into(),
                params
                    .iter()
                    .map(|p| ("params".to_string(), p.display().to_string()))
                    .collect(),
                crate::options_map(&[("seed", p.seed.to_string())]),
            )
            .write(&out)?;
            analyses::emit_corpus_files(&out, &corpus, &oracle)
        }
        Command::Report { inputs, all, config } => {
            if !all {
                return Err(CliError::Usage("report currently requires --all".into()));
            }
            let (corpus, report) = load_corpus(&inputs, strict)?;
            let (sa_spec, cip_spec) = load_config_pair(&config)?;
            let out = OutDir::create(&out_path)?;
            manifest(
                "report".into(),
                inputs_map(&inputs),
                crate::options_map(&[("all", "true".into()), ("config", config.clone())]),
            )
            .write(&out)?;
            analyses::emit_report(
                &out,
                &corpus,
                &report,
                &sa_spec,
                &cip_spec,
                window,
                boundary,
                seed.unwrap_or(0),
            )
        }
    }
}

fn run_metrics(
    cmd: MetricsCmd,
    window: YearWindow,
    boundary: i32,
    strict: bool,
    out_path: &Path,
    manifest: impl Fn(String, BTreeMap<String, String>, BTreeMap<String, String>) -> Manifest,
) -> Result<(), CliError> {
    match cmd {
        MetricsCmd::Zscore { inputs } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let out = OutDir::create(out_path)?;
            manifest("metrics zscore".into(), inputs_map(&inputs), BTreeMap::new()).write(&out)?;
            analyses::emit_zscore(&out, &corpus, window).map(|_| ())
        }
        MetricsCmd::Diversity { inputs, taxon, collapse } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let taxon: Taxon = taxon.into();
            let collapse = parse_collapse(collapse.as_deref(), taxon)?;
            let out = OutDir::create(out_path)?;
            manifest(
                "metrics diversity".into(),
                inputs_map(&inputs),
                metric_options(taxon, collapse.as_ref()),
            )
            .write(&out)?;
            analyses::emit_diversity(&out, &corpus, taxon, collapse.as_ref())
        }
        MetricsCmd::Cooccur { inputs, taxon, kind, collapse } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let taxon: Taxon = taxon.into();
            let collapse = parse_collapse(collapse.as_deref(), taxon)?;
            let out = OutDir::create(out_path)?;
            manifest(
                "metrics cooccur".into(),
                inputs_map(&inputs),
                metric_options(taxon, collapse.as_ref()),
            )
            .write(&out)?;
            analyses::emit_cooccur(
                &out,
                &corpus,
                taxon,
                kind.into(),
                collapse.as_ref(),
                window,
                boundary,
            )
        }
        MetricsCmd::Timeseries { inputs, taxon, collapse, deflate } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let taxon: Taxon = taxon.into();
            let collapse = parse_collapse(collapse.as_deref(), taxon)?;
            let out = OutDir::create(out_path)?;
            let mut opts = metric_options(taxon, collapse.as_ref());
            opts.insert("deflate".into(), deflate.to_string());
            manifest("metrics timeseries".into(), inputs_map(&inputs), opts).write(&out)?;
            analyses::emit_timeseries(&out, &corpus, taxon, collapse.as_ref(), deflate)
        }
        MetricsCmd::Fractions { inputs, taxon } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let taxon: Taxon = taxon.into();
            let out = OutDir::create(out_path)?;
            manifest("metrics fractions".into(), inputs_map(&inputs), metric_options(taxon, None))
                .write(&out)?;
            analyses::emit_fractions(&out, &corpus, taxon, window)
        }
    }
}

fn run_networks(
    cmd: NetworksCmd,
    window: YearWindow,
    boundary: i32,
    strict: bool,
    out_path: &Path,
    manifest: impl Fn(String, BTreeMap<String, String>, BTreeMap<String, String>) -> Manifest,
) -> Result<(), CliError> {
    match cmd {
        NetworksCmd::Bipartite { inputs, norm, config } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let (sa_spec, cip_spec) = load_config_pair(&config)?;
            let out = OutDir::create(out_path)?;
            manifest(
                "networks bipartite".into(),
                inputs_map(&inputs),
                crate::options_map(&[("config", config.clone())]),
            )
            .write(&out)?;
            analyses::emit_bipartite(&out, &corpus, norm.into(), &sa_spec, &cip_spec)
        }
        NetworksCmd::Delta { inputs, norm, config } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let (sa_spec, cip_spec) = load_config_pair(&config)?;
            let out = OutDir::create(out_path)?;
            manifest(
                "networks delta".into(),
                inputs_map(&inputs),
                crate::options_map(&[("config", config.clone())]),
            )
            .write(&out)?;
            analyses::emit_delta(&out, &corpus, norm.into(), &sa_spec, &cip_spec)
        }
        NetworksCmd::Mst { inputs, taxon, kind } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let taxon: Taxon = taxon.into();
            let out = OutDir::create(out_path)?;
            manifest("networks mst".into(), inputs_map(&inputs), metric_options(taxon, None))
                .write(&out)?;
            analyses::emit_mst(&out, &corpus, taxon, kind.into(), window)
        }
        NetworksCmd::Interfaces { inputs, p1, p2 } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let out = OutDir::create(out_path)?;
            manifest(
                "networks interfaces".into(),
                inputs_map(&inputs),
                crate::options_map(&[
                    ("p1", format!("{}:{}", p1.start, p1.end)),
                    ("p2", format!("{}:{}", p2.start, p2.end)),
                ]),
            )
            .write(&out)?;
            analyses::emit_interfaces(&out, &corpus, p1, p2)
        }
        NetworksCmd::Breadth { inputs, filter_joint, z_side } => {
            let (corpus, _) = load_corpus(&inputs, strict)?;
            let filter = match &filter_joint {
                Some(name) => Some(load_config_pair(name)?),
                None => None,
            };
            let out = OutDir::create(out_path)?;
            manifest(
                "networks breadth".into(),
                inputs_map(&inputs),
                crate::options_map(&[(
                    "filter_joint",
                    filter_joint.clone().unwrap_or_else(|| "none".into()),
                )]),
            )
            .write(&out)?;
            let z_side = z_side.map(|s| match s {
                ZSideArg::Above => xsci_core::ZGroup::Above,
                ZSideArg::Below => xsci_core::ZGroup::Below,
            });
            analyses::emit_breadth(&out, &corpus, filter.as_ref(), z_side, window)
        }
    }
}

impl From<crate::MatrixKindArg> for xsci_core::MatrixKind {
    fn from(k: crate::MatrixKindArg) -> Self {
        match k {
            crate::MatrixKindArg::Full => xsci_core::MatrixKind::Full,
            crate::MatrixKindArg::Viz => xsci_core::MatrixKind::OffDiagonal,
        }
    }
}

impl From<crate::NormArg> for xsci_core::BipartiteNorm {
    fn from(n: crate::NormArg) -> Self {
        match n {
            crate::NormArg::Unit => xsci_core::BipartiteNorm::UnitMass,
            crate::NormArg::Distinct => xsci_core::BipartiteNorm::DistinctCount,
        }
    }
}

fn xdef_from(config: &str, taxon: XTaxonArg) -> Result<XDefinition, CliError> {
    let taxon = match taxon {
        XTaxonArg::Sa => XTaxon::Sa,
        XTaxonArg::Cip => XTaxon::Cip,
        XTaxonArg::Joint => XTaxon::Joint,
    };
    Ok(XDefinition::from_name(config, taxon)?)
}

fn metric_options(
    taxon: Taxon,
    collapse: Option<&xsci_core::CollapseSpec>,
) -> BTreeMap<String, String> {
    crate::options_map(&[
        ("taxon", taxon.name().to_string()),
        ("collapse", collapse.map_or_else(|| "none".to_string(), |c| format!("{} groups", c.dim()))),
    ])
}

fn parse_collapse(
    spec: Option<&str>,
    taxon: Taxon,
) -> Result<Option<xsci_core::CollapseSpec>, CliError> {
    match spec {
        Some(text) => Ok(Some(xsci_core::CollapseSpec::parse(text, taxon.dim())?)),
        None => Ok(None),
    }
}

fn inputs_map(inputs: &InputArgs) -> BTreeMap<String, String> {
    crate::options_map(&[
        ("articles", inputs.articles.display().to_string()),
        ("authors", inputs.authors.display().to_string()),
        ("taxonomy", inputs.taxonomy.display().to_string()),
    ])
}

/// Load and parse a corpus, reporting missing paths as usage errors.
pub fn load_corpus(inputs: &InputArgs, strict: bool) -> Result<(Corpus, IngestReport), CliError> {
    for (name, path) in [
        ("articles", &inputs.articles),
        ("authors", &inputs.authors),
        ("taxonomy", &inputs.taxonomy),
    ] {
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "missing {name} input: {}",
                path.display()
            )));
        }
    }
    let maps = TaxonomyMaps::load_dir(&inputs.taxonomy)?;
    let articles = BufReader::new(
        File::open(&inputs.articles)
            .map_err(|e| CliError::Data(format!("cannot open articles: {e}")))?,
    );
    let authors = BufReader::new(
        File::open(&inputs.authors)
            .map_err(|e| CliError::Data(format!("cannot open authors: {e}")))?,
    );
    Ok(parse_corpus(articles, authors, &maps, strict)?)
}

/// Resolve a configuration name or file into an (SA, CIP) spec pair.
/// Builtin names configure both taxonomies; a file configures its own
/// arity and leaves the other side broad.
pub fn load_config_pair(name_or_path: &str) -> Result<(ConfigSpec, ConfigSpec), CliError> {
    if let (Some(sa), Some(cip)) = (
        ConfigSpec::builtin(name_or_path, Taxon::Sa),
        ConfigSpec::builtin(name_or_path, Taxon::Cip),
    ) {
        return Ok((sa, cip));
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "config {name_or_path:?} is neither a built-in name nor an existing file"
        )));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read config: {e}")))?;
    let spec = ConfigSpec::parse(&text)?;
    Ok(match spec.arity {
        Taxon::Sa => (spec, ConfigSpec::broad(Taxon::Cip)),
        Taxon::Cip => (ConfigSpec::broad(Taxon::Sa), spec),
    })
}
