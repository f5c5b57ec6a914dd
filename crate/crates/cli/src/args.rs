use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use netdyn_core::DEFAULT_TREE_CAP;

use crate::format::DEFAULT_PRECISION;

/// Analyse and simulate dynamics on networks described in JSON files.
#[derive(Debug, Parser)]
#[command(name = "netdyn", version)]
pub struct Cli {
    /// Emit the report as JSON in full precision.
    #[arg(long, global = true)]
    pub json: bool,
    /// Significant digits in text output.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sizes, connectivity, incidence matrix and Laplacians.
    Info { file: PathBuf },
    /// Spanning-tree count and tree-weight sums.
    Trees {
        file: PathBuf,
        /// Largest tree count that will be enumerated.
        #[arg(long, env = "NETDYN_CAP", default_value_t = DEFAULT_TREE_CAP)]
        cap: u128,
        /// Also count positive and negative trees; every edge must be +1 or -1.
        #[arg(long)]
        signed: bool,
    },
    /// Jacobian rank, kernel and tree-sum test at an equilibrium.
    Equilibria {
        file: PathBuf,
        /// Comma-separated state to test; defaults to the zero state.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, env = "NETDYN_CAP", default_value_t = DEFAULT_TREE_CAP)]
        cap: u128,
    },
    /// Integrate a model and write its trajectory.
    Simulate(SimulateArgs),
    /// Column discs and stability certificate of the two-level system.
    Gershgorin { file: PathBuf },
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub model: Model,
    /// Initial state as `a,b,c` or `seed:N` for uniform values in [-1, 1].
    #[arg(long, default_value = "seed:42", allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = 50.0)]
    pub horizon: f64,
    /// Fixed step for rk4, initial step for rk45.
    #[arg(long, default_value_t = 1e-2)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Rk4)]
    pub method: MethodArg,
    /// Two-level system variant.
    #[arg(long, value_enum, default_value_t = VariantArg::Simplified)]
    pub variant: VariantArg,
    /// Trajectory CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the JSON summary to this path.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Unweighted Laplacian consensus.
    Consensus,
    /// Heterogeneous network with algebraic nodes after the first typeOneCount.
    Dae,
    /// Agent/group dynamics.
    Twolevel,
    /// Linear potential-driven flow with the file's weights.
    Flow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rk4,
    Rk45,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Simplified,
    Full,
    NodeGroup,
}
