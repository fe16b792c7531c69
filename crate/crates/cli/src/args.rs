use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "symtwirl", version, about = "Weighted symmetric designs for the permutation twirl")]
pub struct Cli {
    /// Largest Hilbert-space dimension d^n for dense operators.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct or check a design.
    #[command(subcommand)]
    Design(DesignCommand),
    /// Closed-form bounds, optionally evaluated on a design.
    Bounds(BoundsArgs),
    /// Types of words of length n over d letters.
    Types(TypesArgs),
    /// Diamond-distance bracket and the approximate entropy bound for a distribution.
    Approx(ApproxArgs),
    /// Channel designs.
    #[command(subcommand)]
    Channel(ChannelCommand),
}

#[derive(Debug, Subcommand)]
pub enum DesignCommand {
    /// Reduce the uniform distribution to a small-support design.
    Find(FindArgs),
    /// Verify a design file exactly.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum ChannelCommand {
    /// Check a design file as a channel design from dH- to dK-dimensional systems.
    Verify(ChannelVerifyArgs),
}

#[derive(Debug, Args)]
pub struct FindArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    /// Also write the design file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub design: PathBuf,
    /// Random operators for the additional operational check.
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum Dimension {
    /// D = d^n.
    #[default]
    TensorPower,
    /// D = d.
    Local,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: Option<f64>,
    /// A design file to evaluate; it is verified first.
    #[arg(long)]
    pub design: Option<PathBuf>,
    /// Dimension entering the continuity term of the approximate bound.
    #[arg(long, value_enum, default_value_t)]
    pub dimension: Dimension,
}

#[derive(Debug, Args)]
pub struct TypesArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[arg(long)]
    pub design: PathBuf,
    /// Local dimension; defaults to the file's.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub dimension: Dimension,
}

#[derive(Debug, Args)]
pub struct ChannelVerifyArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long)]
    pub dh: usize,
    #[arg(long)]
    pub dk: usize,
    /// Direct comparisons on random channels.
    #[arg(long, default_value_t = 2)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
