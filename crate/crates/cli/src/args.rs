use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polardim::pipeline::InteractionKind;
use polardim::report::DEFAULT_K;
use polardim::sbm;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "polardim",
    version,
    about = "Measure polarisation as loss of embedding dimension"
)]
pub struct Cli {
    /// Worker threads for replicate-level parallelism (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension and entropy of a network and of its giant component.
    Estimate(EstimateArgs),
    /// Leading singular values of a network.
    Spectrum(SpectrumArgs),
    /// Compare dimension across time windows of an interaction log.
    Compare(CompareArgs),
    /// Node-bootstrap distribution of dimension and entropy.
    Bootstrap(BootstrapArgs),
    /// Stochastic block model experiment grids.
    #[command(subcommand)]
    Sbm(SbmCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// Detect from the first content line.
    Auto,
    /// `src<TAB>dst` per line.
    Edges,
    /// Interaction records, tab-separated or one JSON object per line.
    Records,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NetworkArgs {
    /// Network file (edge list or interaction records).
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,

    /// Keep edge direction instead of symmetrising.
    #[arg(long)]
    pub directed: bool,

    /// Interaction kinds that form edges when reading records.
    #[arg(long, value_delimiter = ',', default_values_t = polardim::pipeline::DEFAULT_KINDS.to_vec(), value_parser = parse_kind)]
    pub kinds: Vec<InteractionKind>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    /// Number of singular values used for the elbow and the entropy.
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,

    /// Seed for the SVD start vectors and any resampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Ritz residual tolerance relative to the largest singular value.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,

    /// Cap on the Krylov basis size.
    #[arg(long)]
    pub max_basis: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Include the singular values in the report.
    #[arg(long)]
    pub emit_spectrum: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Use the giant component instead of the whole network.
    #[arg(long)]
    pub giant: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Interaction-record file to split into windows.
    #[arg(long, required_unless_present = "reports", conflicts_with = "reports")]
    pub records: Option<PathBuf>,

    /// Window as `label:start:end` (UTC seconds, end exclusive). Repeatable.
    #[arg(long = "window", value_parser = parse_window)]
    pub windows: Vec<WindowArg>,

    /// JSON array of precomputed window rows (`label`, `d_hat`, `entropy`,
    /// optional `d_hat_gc` and `entropy_gc`, `k_used`) to compare directly.
    #[arg(long)]
    pub reports: Option<PathBuf>,

    #[arg(long)]
    pub directed: bool,

    #[arg(long, value_delimiter = ',', default_values_t = polardim::pipeline::DEFAULT_KINDS.to_vec(), value_parser = parse_kind)]
    pub kinds: Vec<InteractionKind>,

    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BootstrapTarget {
    Giant,
    Full,
}

#[derive(Debug, Args, Serialize)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    /// Resample the giant component (default) or the whole network.
    #[arg(long, value_enum, default_value_t = BootstrapTarget::Giant)]
    pub on: BootstrapTarget,
    /// Include one row per replicate.
    #[arg(long)]
    pub emit_rows: bool,
}

#[derive(Debug, Subcommand)]
pub enum SbmCommand {
    /// Two equal groups; in-group × between-group probability grid.
    Engagement(EngagementArgs),
    /// Two groups of unequal size; in-group probability × minority share grid.
    Imbalance(ImbalanceArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SbmCommon {
    #[arg(long, default_value_t = sbm::DEFAULT_NODES)]
    pub n: usize,
    #[arg(long, default_value_t = sbm::DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Results table path; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EngagementArgs {
    #[arg(long, value_delimiter = ',', default_values_t = sbm::DEFAULT_IN_PROBS.to_vec())]
    pub in_probs: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = sbm::DEFAULT_OUT_PROBS.to_vec())]
    pub out_probs: Vec<f64>,
    #[command(flatten)]
    pub common: SbmCommon,
}

#[derive(Debug, Args, Serialize)]
pub struct ImbalanceArgs {
    #[arg(long, value_delimiter = ',', default_values_t = sbm::DEFAULT_IN_PROBS.to_vec())]
    pub in_probs: Vec<f64>,
    #[arg(long, default_value_t = sbm::DEFAULT_IMBALANCE_OUT_PROB)]
    pub out_prob: f64,
    /// Minority block shares of the network.
    #[arg(long, value_delimiter = ',', default_values_t = sbm::DEFAULT_SPLITS.to_vec())]
    pub splits: Vec<f64>,
    #[command(flatten)]
    pub common: SbmCommon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowArg {
    pub label: String,
    pub start: u64,
    pub end: u64,
}

fn parse_window(s: &str) -> Result<WindowArg, String> {
    let mut parts = s.rsplitn(3, ':');
    let (end, start, label) = match (parts.next(), parts.next(), parts.next()) {
        (Some(e), Some(s), Some(l)) if !l.is_empty() => (e, s, l),
        _ => return Err(format!("expected `label:start:end`, got `{s}`")),
    };
    let start = start
        .parse()
        .map_err(|e| format!("bad start `{start}`: {e}"))?;
    let end = end.parse().map_err(|e| format!("bad end `{end}`: {e}"))?;
    Ok(WindowArg {
        label: label.to_string(),
        start,
        end,
    })
}

fn parse_kind(s: &str) -> Result<InteractionKind, String> {
    s.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_argument() {
        assert_eq!(
            parse_window("2017-2020:10:20").unwrap(),
            WindowArg {
                label: "2017-2020".into(),
                start: 10,
                end: 20
            }
        );
        assert!(parse_window(":1:2").is_err());
        assert!(parse_window("a:x:2").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
