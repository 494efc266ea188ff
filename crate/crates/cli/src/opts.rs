use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "semistar",
    version,
    about = "Closure operations on submodule lattices of semilocal principal ideal domains",
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    /// Primes defining the model, comma separated (e.g. 2,3)
    #[arg(long, global = true, value_name = "P1,P2,...")]
    pub primes: Option<String>,

    /// Probe depth for evaluation sampling (must be at least 1)
    #[arg(long, global = true, default_value_t = 2, value_name = "D")]
    pub depth: i64,

    /// Write the report here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Output format; each command has a natural default
    #[arg(long, global = true, value_enum, value_name = "FORMAT")]
    pub format: Option<Format>,

    /// Add wall-clock runtime per check to verify reports (output is no
    /// longer byte-stable across runs)
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operation algebra: list, evaluate, compare, classify
    Ops {
        #[command(subcommand)]
        cmd: OpsCmd,
    },
    /// Topological reports for the model's spaces
    Space {
        #[command(subcommand)]
        cmd: SpaceCmd,
    },
    /// Enumerate every operation on the model
    Enumerate,
    /// Run the claim suite
    Verify {
        /// Comma-separated check ids (default: the whole catalog)
        #[arg(long, value_name = "ID,ID,...")]
        checks: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OpsCmd {
    /// The named operations with their tables and flags
    List,
    /// Evaluate EXPR on MODULE, e.g. `ops eval "v" "<K,0>"`
    Eval { expr: String, module: String },
    /// Compare two operations in the pointwise order
    Order { left: String, right: String },
    /// Classification flags for one operation
    Classify { expr: String },
}

#[derive(Subcommand, Debug)]
pub enum SpaceCmd {
    /// The prime spectrum
    Spec(SpaceArgs),
    /// The overrings under reverse inclusion
    Over(SpaceArgs),
    /// The local overrings: the field and the valuation rings
    Local(SpaceArgs),
    /// The operation space over a chosen family
    Sstar(SstarArgs),
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    /// Report the inverse topology instead
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Args, Debug)]
pub struct SstarArgs {
    /// Report the inverse topology instead
    #[arg(long)]
    pub inverse: bool,

    /// Which operations to materialize as points
    #[arg(long, value_enum, default_value_t = OpFamily::All, value_name = "FAMILY")]
    pub family: OpFamily,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum OpFamily {
    /// Every operation on the model
    All,
    /// Only the finite-type operations
    FiniteType,
    /// Only the operations fixing the base ring
    Star,
}
