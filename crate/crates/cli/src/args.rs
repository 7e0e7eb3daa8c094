use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "quadturan",
    version,
    about = "Covering quadruple systems, fair submatrices and G_k cliques"
)]
pub struct Cli {
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file; for `construct`, the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Profiles as "a,b;a,b;...".
    #[arg(long, conflicts_with = "family")]
    pub profiles: Option<String>,

    /// Built-in family, "k2:<k>" or "k3:<k>".
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Debug, Args)]
pub struct Budget {
    #[arg(long)]
    pub budget_ms: Option<u64>,

    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random matrix over Z_k and its fair-submatrix system.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// Descend to a local minimum of the system size.
        #[arg(long)]
        optimize: bool,
        /// Profiles the optimized system must keep covering (default "k2:<k>").
        #[command(flatten)]
        profiles: ProfileArgs,
        /// Entry visits allowed to the descent.
        #[arg(long, default_value_t = 1_000_000)]
        budget_nodes: u64,
    },
    /// Check a quad system file against profiles.
    Verify {
        #[arg(long)]
        quads: PathBuf,
        #[command(flatten)]
        profiles: ProfileArgs,
    },
    /// Exact minimum covering system on a tiny instance.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        profiles: ProfileArgs,
        #[command(flatten)]
        budget: Budget,
    },
    /// Lower bound, constructions and exact value side by side.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// "k2:<k>" or "k3:<k>".
        #[arg(long)]
        family: String,
        /// Comma-separated seeds (default: 20 consecutive seeds from the default seed).
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Clique number of G_k.
    Clique {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        budget: Budget,
        /// Required for k >= 9; enables checkpointing.
        #[arg(long)]
        long_running: bool,
        #[arg(long, default_value_t = 60)]
        checkpoint_interval_s: u64,
    },
    /// Exact triangle count of G_k.
    Triangles {
        #[arg(long)]
        k: u32,
    },
    /// The two-part 4-graph from a binary matrix.
    Caen {
        #[arg(long, required_unless_present = "matrix")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "matrix")]
        m: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Read the matrix from a file instead of drawing one.
        #[arg(long, conflicts_with_all = ["n", "m", "seed"])]
        matrix: Option<PathBuf>,
    },
    /// Wall-clock timings of the exhaustive suites and clique search.
    Bench {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Lemmas,
    Clique,
    Exact,
    Caen,
}
