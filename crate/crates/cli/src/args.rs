use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcolor_core::Method;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QCOLOR_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "qcolor", version, about = "Graph k-coloring with QUBO, VQE and QAOA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Q matrix and g vector and write them as JSON.
    DumpQubo(DumpArgs),
    /// Print the Ising Hamiltonian terms and write them as text.
    DumpIsing(DumpArgs),
    /// Solve one case with one method.
    Solve(SolveArgs),
    /// Run several optimizer/depth configurations and write one combined trace.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CaseArgs {
    /// Built-in case: flight, frequency or register.
    #[arg(long, default_value = "flight", conflicts_with = "case_file")]
    pub case: String,
    /// TOML case file instead of a built-in case.
    #[arg(long, value_name = "PATH")]
    pub case_file: Option<PathBuf>,
    /// Number of colors [default: the case's k].
    #[arg(long)]
    pub k: Option<usize>,
    /// Penalty weight P [default: the case's penalty].
    #[arg(long)]
    pub penalty: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file [default: derived from the case name, inside $QCOLOR_OUT_DIR or the working directory].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Directory for default output paths.
    #[arg(long, env = OUT_DIR_ENV, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Greedy,
    Backtrack,
    Brute,
    Vqe,
    Qaoa,
}

impl SolveMethod {
    pub fn name(self) -> &'static str {
        match self {
            SolveMethod::Greedy => "greedy",
            SolveMethod::Backtrack => "backtrack",
            SolveMethod::Brute => "brute",
            SolveMethod::Vqe => "vqe",
            SolveMethod::Qaoa => "qaoa",
        }
    }

    pub fn is_variational(self) -> bool {
        matches!(self, SolveMethod::Vqe | SolveMethod::Qaoa)
    }
}

#[derive(Debug, Clone, Args)]
pub struct VariationalArgs {
    /// Random restarts [default: 5 for vqe, 10 for qaoa].
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Master seed for initial parameters and final sampling.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Shots drawn from the optimized state.
    #[arg(long, default_value_t = 4096)]
    pub shots: usize,
    /// Iteration budget per restart.
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Worker threads [default: one per core].
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_enum, default_value = "vqe")]
    pub method: SolveMethod,
    /// Ansatz depth (vqe).
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// QAOA layers.
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    /// cobyla, quasi-newton-fd or nelder-mead.
    #[arg(long, default_value = "cobyla")]
    pub optimizer: Method,
    #[command(flatten)]
    pub run: VariationalArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Trace CSV [default: next to the result file].
    #[arg(long, value_name = "PATH")]
    pub trace_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareMethod {
    Vqe,
    Qaoa,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_enum, default_value = "vqe")]
    pub method: CompareMethod,
    /// Optimizers to compare, comma separated or repeated.
    #[arg(long, value_delimiter = ',', default_value = "cobyla")]
    pub optimizer: Vec<Method>,
    /// Ansatz depths (vqe), comma separated or repeated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub depth: Vec<usize>,
    /// QAOA layer counts, comma separated or repeated; warm-started from the
    /// next smaller depth.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub p: Vec<usize>,
    #[command(flatten)]
    pub run: VariationalArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
