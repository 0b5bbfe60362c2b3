use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heffter::{H3Method, OrderRule, DEFAULT_SEARCH_BUDGET};

#[derive(Parser, Debug)]
#[command(
    name = "heffter",
    version,
    about = "Build and check globally simple Heffter arrays"
)]
pub struct Cli {
    /// More log output (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an array and verify it before writing.
    Construct(ConstructArgs),
    /// Check a grid file.
    Verify(VerifyArgs),
    /// Print the partial sums of every row or column.
    PartialSums(PartialSumsArgs),
    /// Write the row and column cycle systems of a simple array.
    Decompose(DecomposeArgs),
    /// Compare two cycle-system files.
    Orthogonality(OrthogonalityArgs),
    /// Compose the row and column orderings and report the cycle type.
    Compatibility(CompatibilityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Integer H(n;4p), p >= 3.
    H4p,
    /// Support-shifted H(n;4p,gamma).
    Shifted,
    /// Three-diagonal H(n;3), optionally relocated and shifted.
    H3,
    /// Integer H(n;4p+3).
    H4p3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ClosedForm,
    Search,
}

impl From<Method> for H3Method {
    fn from(m: Method) -> Self {
        match m {
            Method::ClosedForm => H3Method::ClosedForm,
            Method::Search => H3Method::Search,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Natural,
    Diagonal,
}

impl From<Order> for OrderRule {
    fn from(o: Order) -> Self {
        match o {
            Order::Natural => OrderRule::Natural,
            Order::Diagonal => OrderRule::Diagonal,
        }
    }
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub gamma: Option<usize>,
    #[arg(long)]
    pub alpha: Option<usize>,
    /// Base diagonal of a relocated H(n;3).
    #[arg(long)]
    pub beta: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<usize>,
    /// Cyclic shift of the H(n;3) part.
    #[arg(long)]
    pub shift: Option<usize>,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub h3_method: Method,
    #[arg(long, env = "HEFFTER_SEARCH_BUDGET", default_value_t = DEFAULT_SEARCH_BUDGET)]
    pub search_budget: u64,
    /// Also require distinct partial sums modulo 2nk+2.
    #[arg(long)]
    pub plus_one: bool,
    /// Write the grid here; otherwise it goes to stdout and the report to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the grid even if verification is skipped or fails.
    #[arg(long)]
    pub unchecked: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Fill counts, support and sums mod 2ms+1.
    Heffter,
    /// Heffter plus exact zero sums.
    Integer,
    /// Heffter plus distinct partial sums.
    GloballySimple,
    /// Heffter, exact zero sums and distinct partial sums.
    Full,
    /// Support-shifted conditions (needs --gamma).
    Shifted,
    /// Three-diagonal H(n;3) placement (uses --beta, --epsilon).
    Ladder,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    pub level: Level,
    /// Ordering used for the partial-sum checks.
    #[arg(long, value_enum, default_value = "natural")]
    pub order: Order,
    #[arg(long)]
    pub plus_one: bool,
    /// Row fill count, when rows differ.
    #[arg(long)]
    pub s: Option<usize>,
    /// Column fill count, when columns differ.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub gamma: Option<usize>,
    #[arg(long)]
    pub beta: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lines {
    Rows,
    Columns,
}

#[derive(Args, Debug)]
pub struct PartialSumsArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "diagonal")]
    pub order: Order,
    #[arg(long, value_enum, default_value = "rows")]
    pub lines: Lines,
    /// Print symmetric residues modulo this instead of exact sums.
    #[arg(long)]
    pub modulus: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub rows_out: PathBuf,
    #[arg(long)]
    pub cols_out: PathBuf,
    #[arg(long, value_enum, default_value = "natural")]
    pub order: Order,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct OrthogonalityArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CompatibilityArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "natural")]
    pub order: Order,
    #[arg(long)]
    pub json: bool,
}
