//! Command-line pipeline: ingest, classify, metrics, networks, regress,
//! synth, and report over publication corpora.

mod analyses;
mod commands;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xsci_core::{Taxon, YearWindow};

/// Run failure split by exit status: usage errors exit 2, data errors
/// exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<xsci_core::Error> for CliError {
    fn from(e: xsci_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "xsci",
    version,
    about = "Cross-domain classification, diversity metrics, association networks, \
             and citation models for publication corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Analysis window as START:END (inclusive years).
    #[arg(long, global = true, default_value = "1970:2018", value_parser = parse_window)]
    window: YearWindow,

    /// First year of the post period.
    #[arg(long, global = true, default_value_t = xsci_core::DEFAULT_BOUNDARY_YEAR)]
    boundary: i32,

    /// Seed for randomized baselines and the generator.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Fail ingestion on any rejected record.
    #[arg(long, global = true)]
    strict: bool,
}

fn parse_window(text: &str) -> Result<YearWindow, String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected START:END, got {text:?}"))?;
    let start: i32 = a.trim().parse().map_err(|_| format!("bad year {a:?}"))?;
    let end: i32 = b.trim().parse().map_err(|_| format!("bad year {b:?}"))?;
    YearWindow::new(start, end).map_err(|e| e.to_string())
}

/// Corpus input locations shared by the analysis subcommands.
#[derive(Args, Clone)]
pub struct InputArgs {
    /// Line-delimited article records.
    #[arg(long)]
    articles: PathBuf,
    /// Line-delimited author records.
    #[arg(long)]
    authors: PathBuf,
    /// Directory holding mesh.csv, cip.csv, country.csv.
    #[arg(long)]
    taxonomy: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum TaxonArg {
    Sa,
    Cip,
}

impl From<TaxonArg> for Taxon {
    fn from(t: TaxonArg) -> Taxon {
        match t {
            TaxonArg::Sa => Taxon::Sa,
            TaxonArg::Cip => Taxon::Cip,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MatrixKindArg {
    /// Normalized outer product with the diagonal.
    Full,
    /// Off-diagonal visualization variant.
    Viz,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum NormArg {
    /// Unit mass per article.
    Unit,
    /// Divide by the distinct-category count.
    Distinct,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum XTaxonArg {
    Sa,
    Cip,
    Joint,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ZSideArg {
    Above,
    Below,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a corpus, writing the normalized records and an
    /// ingestion report.
    Ingest {
        #[command(flatten)]
        inputs: InputArgs,
    },
    /// Label every article mono/cross under a configuration.
    Classify {
        #[command(flatten)]
        inputs: InputArgs,
        /// Built-in name (broad, neighboring, distant) or a config file
        /// path.
        #[arg(long, default_value = "broad")]
        config: String,
    },
    /// Citation normalization, diversity, co-occurrence, time series,
    /// and category-count fractions.
    Metrics {
        #[command(subcommand)]
        cmd: MetricsCmd,
    },
    /// Bipartite association networks, spanning trees, interfaces, and
    /// breadth profiles.
    Networks {
        #[command(subcommand)]
        cmd: NetworksCmd,
    },
    /// Logit propensity and fixed-effects citation models.
    Regress {
        #[command(subcommand)]
        cmd: RegressCmd,
    },
    /// Generate a synthetic corpus with planted effects.
    Synth {
        /// TOML parameter file; defaults apply when omitted.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Run every analysis over one corpus into a single output tree.
    Report {
        #[command(flatten)]
        inputs: InputArgs,
        /// Emit every analysis (the only supported mode).
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "broad")]
        config: String,
    },
}

#[derive(Subcommand)]
pub enum MetricsCmd {
    /// Per-year citation cohorts and the window-mean scale.
    Zscore {
        #[command(flatten)]
        inputs: InputArgs,
    },
    /// Per-article diversity scores.
    Diversity {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long, value_enum, default_value = "sa")]
        taxon: TaxonArg,
        /// Supergroup collapse, e.g. [1,3]|[2,4-7].
        #[arg(long)]
        collapse: Option<String>,
    },
    /// Aggregate co-occurrence matrices per region and period, with the
    /// volume-corrected shift.
    Cooccur {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long, value_enum, default_value = "sa")]
        taxon: TaxonArg,
        #[arg(long, value_enum, default_value = "viz")]
        kind: MatrixKindArg,
        #[arg(long)]
        collapse: Option<String>,
    },
    /// Mean diversity by year and region, optionally deflated.
    Timeseries {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long, value_enum, default_value = "sa")]
        taxon: TaxonArg,
        #[arg(long)]
        collapse: Option<String>,
        #[arg(long)]
        deflate: bool,
    },
    /// Fractions of articles per category count, split by impact.
    Fractions {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long, value_enum, default_value = "sa")]
        taxon: TaxonArg,
    },
}

#[derive(Subcommand)]
pub enum NetworksCmd {
    /// Mono and cross CIP-SA association matrices.
    Bipartite {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long, value_enum, default_value = "unit")]
        norm: NormArg,
        #[arg(long, default_value = "broad")]
        config: String,
    },
    /// Pruned matrices and their positive difference.
    Delta {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long, value_enum, default_value = "unit")]
        norm: NormArg,
        #[arg(long, default_value = "broad")]
        config: String,
    },
    /// Maximum-weight spanning tree of aggregate co-occurrence.
    Mst {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long, value_enum, default_value = "sa")]
        taxon: TaxonArg,
        #[arg(long, value_enum, default_value = "viz")]
        kind: MatrixKindArg,
    },
    /// Supergroup interface fractions across two periods.
    Interfaces {
        #[command(flatten)]
        inputs: InputArgs,
        /// First period as START:END.
        #[arg(long, default_value = "1999:2008", value_parser = parse_window)]
        p1: YearWindow,
        /// Second period as START:END.
        #[arg(long, default_value = "2009:2018", value_parser = parse_window)]
        p2: YearWindow,
    },
    /// Mean SA breadth per CIP count.
    Breadth {
        #[command(flatten)]
        inputs: InputArgs,
        /// Restrict to jointly cross-domain articles under this
        /// configuration.
        #[arg(long)]
        filter_joint: Option<String>,
        /// Restrict to one citation-impact side.
        #[arg(long, value_enum)]
        z_side: Option<ZSideArg>,
    },
}

#[derive(Args, Clone)]
pub struct RegressArgs {
    #[command(flatten)]
    inputs: InputArgs,
    /// Configuration defining cross-domain status.
    #[arg(long, value_parser = ["broad", "neighboring", "distant"], default_value = "broad")]
    x: String,
    #[arg(long, value_enum, default_value = "joint")]
    taxon: XTaxonArg,
    /// Add the post-period indicator and interactions.
    #[arg(long)]
    did: bool,
}

#[derive(Subcommand)]
pub enum RegressCmd {
    /// Article-level logit for cross-domain propensity.
    Logit {
        #[command(flatten)]
        args: RegressArgs,
    },
    /// Author fixed-effects citation model.
    Fe {
        #[command(flatten)]
        args: RegressArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Manifest option map helper.
pub fn options_map(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
