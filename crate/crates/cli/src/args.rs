use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairmech_core::exec::{DEFAULT_ENUMERATION_CAP, DEFAULT_SUPPORT_CAP};
use fairmech_core::oracle::Others;
use fairmech_core::properties::Criterion;
use fairmech_core::FairnessNotion;

#[derive(Debug, Parser)]
#[command(
    name = "fairmech",
    version,
    about = "Randomized chore and mixed-item mechanisms: runs, property checks, strategyproofness verification and impossibility replays"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Maximum support atoms a mechanism may enumerate.
    #[arg(long, global = true, env = "FAIRMECH_SUPPORT_CAP", default_value_t = DEFAULT_SUPPORT_CAP)]
    pub support_cap: u64,
    /// Maximum allocations or report profiles an oracle may enumerate.
    #[arg(long, global = true, env = "FAIRMECH_ENUM_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub enum_cap: u64,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance with a true profile.
    Gen(GenArgs),
    /// Run a mechanism and print its exact output lottery.
    Run(RunArgs),
    /// Evaluate fairness and efficiency of an allocation or mechanism output.
    Check(CheckArgs),
    /// Search for profitable misreports.
    Verify(VerifyArgs),
    /// Replay one of the fixed impossibility and bound constructions.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Chores1,
    Choresk,
    Mixed2,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Agents; mixed2 instances have exactly two.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: usize,
    /// Values per chore for choresk.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Smallest value magnitude numerator.
    #[arg(long, default_value_t = 1)]
    pub min: i64,
    /// Largest value magnitude numerator.
    #[arg(long, default_value_t = 4)]
    pub max: i64,
    /// Common denominator of every value.
    #[arg(long, default_value_t = 1)]
    pub den: i64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Omit the true profile.
    #[arg(long)]
    pub no_truth: bool,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Instance file in the canonical text format.
    pub instance: PathBuf,
    /// Reported profile file; defaults to the instance's reported, then true profile.
    #[arg(long)]
    pub reports: Option<PathBuf>,
    /// True profile file; defaults to the instance's true profile.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub profiles: ProfileArgs,
    /// randchore, randmixed, fewest-zeros or seqpick.
    #[arg(long)]
    pub mechanism: String,
    /// Items each agent picks, for seqpick.
    #[arg(long, value_delimiter = ',')]
    pub seq: Vec<usize>,
    /// Agent turn order, for seqpick; defaults to 0, 1, ...
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<usize>,
    /// Also draw one allocation with this seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub profiles: ProfileArgs,
    /// Allocation file (`agents:` and `owners:`).
    #[arg(long, conflicts_with_all = ["output", "mechanism"])]
    pub allocation: Option<PathBuf>,
    /// Mechanism output file as printed by `run`.
    #[arg(long, conflicts_with = "mechanism")]
    pub output: Option<PathBuf>,
    /// Run this mechanism on the reports and check its lottery.
    #[arg(long)]
    pub mechanism: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub seq: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<usize>,
    /// Criteria to require: ef, ef1, eq, eq1, prop, prop1, po, uwm, ewm, ewm2.
    /// Defaults to every criterion that applies.
    #[arg(long, value_delimiter = ',')]
    pub notions: Vec<Criterion>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Spie,
    Gspie,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance file in the canonical text format.
    pub instance: PathBuf,
    /// True profile file; defaults to the instance's true profile.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub mechanism: String,
    #[arg(long, value_enum, default_value_t = VerifyMode::Spie)]
    pub mode: VerifyMode,
    /// all or truthful.
    #[arg(long, default_value_t = Others::All)]
    pub others: Others,
    /// Largest coalition for gspie; defaults to every agent.
    #[arg(long)]
    pub max_coalition: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReplayName {
    Theorem1,
    Theorem2,
    Freeman,
    EwmBound,
    MixedEq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SliceArg {
    Pinned,
    Full,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(value_enum)]
    pub case: ReplayName,
    /// Agents for ewm-bound.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Profile slice for theorem2.
    #[arg(long, value_enum, default_value_t = SliceArg::Pinned)]
    pub slice: SliceArg,
    /// Fairness notion for theorem2.
    #[arg(long, default_value_t = FairnessNotion::Eq1)]
    pub notion: FairnessNotion,
}
