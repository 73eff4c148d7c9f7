//! `jwphase` command-line tool.
//!
//! Flags may also be set through environment variables (`JWPHASE_SEED`,
//! `JWPHASE_SHOTS`, ...); an explicit flag wins over the variable, which wins
//! over the built-in default. Exit codes: 0 success, 1 usage or input error,
//! 2 infeasible or negative verdict.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jwphase::pauli::DEFAULT_STABILIZER_CAP;

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "jwphase", version, about = "Line-graph phase spaces for qubit magic-state computation")]
pub struct Cli {
    /// Number of qubits (subcommand specific default).
    #[arg(long, global = true, env = "JWPHASE_N")]
    pub n: Option<usize>,
    /// Sampled passes.
    #[arg(long, global = true, env = "JWPHASE_SHOTS", default_value_t = 10_000)]
    pub shots: u64,
    /// Master seed; shot `k` uses stream `k` of ChaCha8 seeded with it.
    #[arg(long, global = true, env = "JWPHASE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest qubit count for exhaustive stabilizer enumeration.
    #[arg(long, global = true, env = "JWPHASE_CAP_STABILIZERS", default_value_t = DEFAULT_STABILIZER_CAP)]
    pub cap_stabilizers: usize,
    /// Attempts for randomized searches.
    #[arg(long, global = true, env = "JWPHASE_BUDGET", default_value_t = 4096)]
    pub budget: usize,
    #[arg(long, global = true, env = "JWPHASE_FORMAT", value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "JWPHASE_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isotropic counting table f(n,m) with the 2^n - 1 column.
    TableFnm {
        #[arg(default_value_t = 5)]
        n_max: usize,
    },
    /// Sign searches, Lambda minima and vertex ranks for Majorana operators.
    VerifyVertices {
        /// Test one sign string (`0`/`1` per support point) instead of searching.
        #[arg(long)]
        eta: Option<String>,
    },
    /// Sample a circuit file, or compute its exact distribution.
    Simulate {
        circuit: PathBuf,
        /// Exact distribution from the dense reference instead of sampling.
        #[arg(long)]
        oracle: bool,
        /// Also report the total variation distance to the exact distribution.
        #[arg(long)]
        compare: bool,
        /// Signed sampling with minimum one-norm weights.
        #[arg(long)]
        quasi: bool,
        #[arg(long, default_value = "linegraph")]
        set: String,
    },
    /// Robustness of the input state of a circuit file over one or more sets.
    Robustness {
        state: PathBuf,
        /// Comma-separated selectors: stabilizer, cnc, linegraph, file:<path>.
        #[arg(long, default_value = "linegraph")]
        set: String,
        /// Exact rational LP (rational states only).
        #[arg(long)]
        exact: bool,
    },
    /// Nonnegative decomposition, or a separating hyperplane when none exists.
    Decompose {
        state: PathBuf,
        #[arg(long, default_value = "linegraph")]
        set: String,
        #[arg(long)]
        exact: bool,
    },
    /// Line-graph recognition of an edge-list graph.
    LineGraph {
        graph: PathBuf,
        /// Collapse twin classes before recognition.
        #[arg(long)]
        twins: bool,
    },
    /// Lower bound on log2(2^n f(n,m)) over a range of n.
    StirlingBound {
        #[arg(long, default_value_t = 6)]
        n_min: usize,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
    },
    /// Exact robustness of magic of a Majorana vertex against n(2n+1)/2 + 1.
    VertexMagic {
        #[arg(long)]
        eta: Option<String>,
    },
    /// Assemble a generating set and optionally write its operators.
    BuildPhaseSpace {
        #[arg(long, default_value = "linegraph")]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok((text, verdict)) => {
            print!("{text}");
            ExitCode::from(verdict as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
