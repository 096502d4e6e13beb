use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod records;

#[derive(Parser, Debug)]
#[command(
    name = "lcamatch",
    version,
    about = "Local computation of approximate maximum matchings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Answer whether one edge is in the matching.
    Query(QueryArgs),
    /// Query every edge and certify the resulting matching.
    Materialize(MaterializeArgs),
    /// Measure query cost on random bounded-degree graphs.
    Bench(BenchArgs),
    /// Estimate the size distribution of random query trees.
    Querytree(QuerytreeArgs),
    /// Write a random bounded-degree graph in edge-list format.
    Gen(GenArgs),
    /// Print the hex seed blob an rng seed expands to.
    Seed(SeedArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Kwise,
    FullRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MemoArg {
    Off,
    PerQuery,
    Shared,
}

#[derive(Args, Debug, Clone)]
pub struct SeedSpec {
    /// Seed for every random choice.
    #[arg(long, env = "LCAMATCH_RNG_SEED", conflicts_with = "seed_blob")]
    pub rng_seed: Option<u64>,
    /// Hex seed blob to replay, or @FILE holding one.
    #[arg(long)]
    pub seed_blob: Option<String>,
    #[arg(long, value_enum, default_value = "kwise")]
    pub ordering: OrderingArg,
    /// κ = FACTOR · ⌈log₂ n⌉.
    #[arg(long, default_value_t = 4)]
    pub kappa_factor: u32,
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[command(flatten)]
    pub seed: SeedSpec,
    /// Augmenting-path checks allowed per query; 0 disables the cap.
    #[arg(long, default_value_t = lcamatch_core::lca::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Edge as "u v".
    #[arg(long)]
    pub edge: String,
    #[arg(long, value_enum, default_value = "per-query")]
    pub memo: MemoArg,
    #[arg(short, long)]
    pub verbose: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct MaterializeArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value = "shared")]
    pub memo: MemoArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Edge queries sampled per trial.
    #[arg(long, default_value_t = 200)]
    pub queries: usize,
    #[arg(long, env = "LCAMATCH_RNG_SEED")]
    pub rng_seed: Option<u64>,
    #[arg(long, default_value_t = lcamatch_core::lca::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value = "kwise")]
    pub ordering: OrderingArg,
    /// Skip materializing and certifying each trial's matching.
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long, value_enum, default_value = "records")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct QuerytreeArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 500)]
    pub cap: usize,
    #[arg(long, env = "LCAMATCH_RNG_SEED")]
    pub rng_seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub max_edges: Option<usize>,
    #[arg(long, env = "LCAMATCH_RNG_SEED")]
    pub rng_seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SeedArgs {
    /// Graph whose vertex count sizes the seeds.
    #[arg(long, conflicts_with = "n")]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eps: f64,
    #[command(flatten)]
    pub seed: SeedSpec,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Query(a) => commands::query(&a, &mut out),
        Command::Materialize(a) => commands::materialize(&a, &mut out),
        Command::Bench(a) => commands::bench(&a, &mut out),
        Command::Querytree(a) => commands::querytree(&a, &mut out),
        Command::Gen(a) => commands::gen(&a, &mut out),
        Command::Seed(a) => commands::seed(&a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
