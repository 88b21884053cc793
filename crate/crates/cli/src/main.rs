//! `mltm`: load multilayer networks, rank seeds, run diffusion grids and
//! analyse the results.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "mltm",
    version,
    about = "Seed selection under the multilayer linear threshold model"
)]
struct Cli {
    /// Base random seed; defaults to the grid spec's seed or 20240601.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Only print warnings and errors on standard error.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print `layers actors nodes edges` for a network.
    NetInfo {
        #[arg(long)]
        network: PathBuf,
    },
    /// Rank all actors with a seed selection method (CSV).
    Rank(RankArgs),
    /// Run one diffusion and print the result as JSON.
    Simulate(SimulateArgs),
    /// Run a parameter grid and write the results CSV.
    Grid(GridArgs),
    /// Turn a results CSV into heatmaps, tests, rankings and curves.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
struct RankArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long)]
    method: String,
    /// Only write the first positions covering this budget (percent).
    #[arg(long)]
    budget: Option<f64>,
    /// Diffusion threshold used by the greedy method.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Or)]
    protocol: ProtocolArg,
    #[arg(long, default_value_t = 0.1)]
    katz_alpha: f64,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    network: PathBuf,
    /// Comma-separated actor ids.
    #[arg(long, value_delimiter = ',', required = true)]
    seeds: Vec<String>,
    #[arg(long)]
    mu: f64,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Or)]
    protocol: ProtocolArg,
    #[arg(long)]
    max_steps: Option<usize>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Grid spec (JSON); the full parameter table when absent.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Directory holding `NAME.edges` network files.
    #[arg(long)]
    nets: Option<PathBuf>,
    /// Individual network files, named by file stem.
    #[arg(long)]
    network: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    results: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Artifacts to produce; all when absent.
    #[arg(long, value_enum, value_delimiter = ',')]
    which: Vec<Artifact>,
    /// Networks for the seed set similarity curve.
    #[arg(long)]
    nets: Option<PathBuf>,
    #[arg(long)]
    network: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProtocolArg {
    Or,
    And,
}

impl From<ProtocolArg> for mltm::Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Or => mltm::Protocol::Or,
            ProtocolArg::And => mltm::Protocol::And,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Artifact {
    Heatmaps,
    Wilcoxon,
    Rankings,
    Curves,
    Jaccard,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::NetInfo { network } => commands::net_info(&network),
        Command::Rank(args) => commands::rank(args, cli.seed),
        Command::Simulate(args) => commands::simulate(args, cli.seed),
        Command::Grid(args) => commands::grid(args, cli.seed),
        Command::Analyze(args) => commands::analyze(args, cli.seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.error);
            ExitCode::from(e.code)
        }
    }
}
