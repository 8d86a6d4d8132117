//! `dagorder`: generate and convert graphs, run the partitioners and
//! orderers, and turn their outputs into metric tables, performance profiles
//! and spy plots.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O or parse failure, 3 validation
//! failure. Errors are reported on stderr as a single JSON object.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dagorder", version, about = "Spectral partitioning and ordering of directed graphs")]
pub struct Cli {
    /// Worker threads for parallel stages (0 = all cores).
    #[arg(long, global = true, env = "DAGORDER_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic graph with a planted bi-partition.
    Gen(GenArgs),
    /// Convert a Matrix Market file into an edge-list dump.
    Convert(ConvertArgs),
    /// Spectral bi-partition of a directed graph.
    Partition(PartitionArgs),
    /// Repair a bi-partition of a DAG into an acyclic one.
    Acyclic(AcyclicArgs),
    /// Topological order of a DAG.
    Toporder(ToporderArgs),
    /// Locality metrics of an order and/or quality metrics of a partition.
    Metrics(MetricsArgs),
    /// Performance profile of a run-record table.
    Profile(ProfileArgs),
    /// Spy plot (permuted adjacency raster) of an order, as a PPM image.
    Spyplot(SpyplotArgs),
    /// Run orderers over many graphs and seeds and write one record each.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct SeedArg {
    #[arg(long, env = "DAGORDER_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Er,
    Ws,
    Sbm,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Edge probability (ER) or rewiring probability (WS).
    #[arg(long)]
    pub p: Option<f64>,
    /// Ring neighbours (WS).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p_int: Option<f64>,
    #[arg(long)]
    pub p_ext: Option<f64>,
    /// Probability that a cross edge points from B to A.
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Edge-list output (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sidecar JSON with the config and planted labels
    /// (default: `<out>.planted.json` when `--out` is given).
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    /// Every off-diagonal entry becomes an edge.
    Digraph,
    /// Denser triangular part, all vertices kept.
    Toporder,
    /// Weakly connected triangular part or the largest component.
    Partition,
    Upper,
    Lower,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = RuleArg::Toporder)]
    pub rule: RuleArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PartitionAlgo {
    /// Direction incentive `c = 1/(2|E|)`.
    SpectralDir,
    /// Fiedler vector, `c = 0`.
    SpectralClassic,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    /// Edge list (`.el`) or Matrix Market (`.mtx`) graph.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = PartitionAlgo::SpectralDir)]
    pub algo: PartitionAlgo,
    /// Override the direction-incentive weight.
    #[arg(long)]
    pub c: Option<f64>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the partition metrics as JSON.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AcyclicArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Partition file (one `S`/`T` per vertex).
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report with cut, bounds and preserved-label fraction.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderAlgo {
    SpectralDir,
    SpectralClassic,
    Dfs,
    Bfs,
    Cm,
    Gorder,
}

impl OrderAlgo {
    pub fn name(self) -> &'static str {
        match self {
            OrderAlgo::SpectralDir => "spectral-dir",
            OrderAlgo::SpectralClassic => "spectral-classic",
            OrderAlgo::Dfs => "dfs",
            OrderAlgo::Bfs => "bfs",
            OrderAlgo::Cm => "cm",
            OrderAlgo::Gorder => "gorder",
        }
    }
}

#[derive(Args, Debug)]
pub struct ToporderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub algo: OrderAlgo,
    /// Gorder window.
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub order: Option<PathBuf>,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also dump the full distributions as `metric,value` CSV.
    #[arg(long)]
    pub distributions: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    /// Run-record CSV.
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub metric: String,
    /// Number of log-spaced thresholds.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpyplotArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub order: PathBuf,
    /// Maximum image side in pixels.
    #[arg(long, default_value_t = 512)]
    pub size: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Graph files; the record's graph id is the file stem.
    #[arg(long, num_args = 1.., required = true)]
    pub graphs: Vec<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [
        OrderAlgo::SpectralDir, OrderAlgo::SpectralClassic, OrderAlgo::Dfs,
        OrderAlgo::Bfs, OrderAlgo::Cm, OrderAlgo::Gorder,
    ])]
    pub algos: Vec<OrderAlgo>,
    #[arg(long, value_delimiter = ',', default_values_t = [0u64])]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    /// Record wall-clock times (makes the table non-reproducible).
    #[arg(long)]
    pub timings: bool,
    /// Also write each order to `<dir>/<graph>.<algo>.<seed>.ord`.
    #[arg(long)]
    pub orders_dir: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return commands::CliError::Usage(e.to_string()).report();
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
