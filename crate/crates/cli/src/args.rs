use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rrf",
    version,
    about = "Certified bounds on the radius of robust feasibility of conic programs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper bounds on the radius.
    Bounds { problem: PathBuf },
    /// Certified distance interval to the epigraphical set.
    Dist { problem: PathBuf },
    /// Brute-force robust feasibility check or radius estimate (n ≤ 3).
    Oracle {
        problem: PathBuf,
        /// Comma-separated per-row radii.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true,
              conflicts_with = "estimate", required_unless_present = "estimate")]
        r: Option<Vec<f64>>,
        /// Bisect on uniform radii instead.
        #[arg(long)]
        estimate: bool,
    },
    /// Certified robust separability radius of a labeled CSV data set.
    Svm { data: PathBuf },
    /// Write the distance problem as an SDPA sparse file.
    ExportSdpa { problem: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Frank–Wolfe gap tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// Oracle grid points per axis (odd).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}
