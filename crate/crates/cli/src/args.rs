use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Chip-firing games, divisor rank and feedback arc sets on small multigraphs.
///
/// Instances are read from INPUT, or from stdin when INPUT is omitted or `-`.
/// Exit status: 0 success, 1 verification failure, 2 usage or input error.
#[derive(Debug, Parser)]
#[command(name = "chipfire", version)]
pub struct Cli {
    /// Print reports as `key: value` lines instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pub human: bool,
    /// Print reports as JSON (the default).
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Instance file; stdin when omitted or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    MinIndex,
    Random,
    Script,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the chips terminate, with a certificate.
    Classify(Input),
    /// Play one legal game.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "min-index")]
        policy: PolicyArg,
        /// Vertices to fire, for `--policy script`.
        #[arg(long, value_delimiter = ',')]
        script: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of firings.
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        /// Print `step vertex chips` lines before the report.
        #[arg(long)]
        trace: bool,
    },
    /// Fewest chips to add before the game cannot terminate.
    Dist(Input),
    /// Rank of the instance divisor.
    Rank(Input),
    /// Whether the divisor has an effective equivalent.
    Winnable(Input),
    /// Reduce a divisor at vertex q, or transform an instance.
    #[command(args_conflicts_with_subcommands = true)]
    Reduce {
        #[command(subcommand)]
        transform: Option<Transform>,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        q: usize,
    },
    /// Exact minimum feedback arc set with its certificate order.
    Minfas(Input),
    /// Whether the chips lie under an acyclic orientation.
    UnderAcyclic {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "greedy")]
        mode: ModeArg,
    },
    /// Check an identity on an instance or over a generated suite.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Print a random instance.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Check a certificate for rank(divisor) <= k.
    VerifyWitness {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// The witness divisor, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        g: Vec<i64>,
    },
    /// Both sides of the Riemann-Roch identity for the divisor.
    RiemannRoch(Input),
}

#[derive(Debug, Subcommand)]
pub enum Transform {
    /// Replace each arc by a heavy edge bundle through a new vertex.
    Phi {
        #[command(flatten)]
        input: Input,
        /// Use this even multiplier instead of the full one.
        #[arg(long = "scaled-m")]
        scaled_m: Option<i64>,
    },
    /// Split every edge with a new vertex.
    Subdivide(Input),
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// dist(0) on the digraph against its transform from the base chips.
    PhiLemma {
        #[command(flatten)]
        input: Input,
        #[arg(long = "scaled-m")]
        scaled_m: Option<i64>,
    },
    /// dist (chips) or rank (divisor) before and after subdivision.
    Subdivision(Input),
    /// Sampled Riemann-Roch residuals.
    RiemannRoch(SuiteArgs),
    /// Fast paths against the brute-force oracles.
    OracleSuite(SuiteArgs),
    /// Random play orders against the min-index game.
    Abelian {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Connected multigraph with independent edge multiplicities.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        max_mult: i64,
        #[arg(long)]
        seed: u64,
    },
    /// Eulerian digraph as a union of random cycles.
    Eulerian {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        cycles: usize,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        seed: u64,
    },
}
