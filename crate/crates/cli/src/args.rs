use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

/// Verification and table generation for the spin-1 BEG cluster expansion.
#[derive(Debug, Parser)]
#[command(name = "beg", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; defaults to `$BEG_OUTPUT_DIR/<command>.<ext>` when that
    /// variable is set, standard output otherwise.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Directory for reports when `--output` is absent.
    #[arg(long, global = true, env = "BEG_OUTPUT_DIR", hide_env_values = true)]
    pub output_dir: Option<PathBuf>,

    /// Enumeration cap overrides, e.g. `polycube-d2=14,brute-sites=12`.
    #[arg(long, global = true)]
    pub budget: Option<String>,

    /// Seed for randomized suites; always recorded in the report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the report even when it has no rows.
    #[arg(long, global = true)]
    pub allow_empty: bool,

    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundary of the analyticity region as a polyline in the (y, x) plane.
    Region(RegionArgs),
    /// Evaluate the convergence criterion at one point over one or many β.
    CheckCriterion(CriterionArgs),
    /// Compare the brute-force partition function with the polymer expansion.
    VerifyIdentity(IdentityArgs),
    /// Run the inequality suites (tree-graph, stability, tree sums).
    VerifyInequalities(InequalityArgs),
    /// Tree counts, embedding weights and C_n.
    Trees(TreesArgs),
    /// Polycube counts against the LLP and BS bounds.
    Bounds(BoundsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Region(_) => "region",
            Command::CheckCriterion(_) => "check-criterion",
            Command::VerifyIdentity(_) => "verify-identity",
            Command::VerifyInequalities(_) => "verify-inequalities",
            Command::Trees(_) => "trees",
            Command::Bounds(_) => "bounds",
        }
    }
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub y_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub y_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Use constants computed from the roots instead of the rounded decimals.
    #[arg(long)]
    pub first_principles: bool,
}

#[derive(Debug, Args)]
pub struct CriterionArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    /// Single inverse temperature; without it a log grid is used.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 50.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 200)]
    pub beta_count: usize,
    /// Also evaluate the raw criterion with this free parameter a > 0.
    #[arg(long)]
    pub a: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// Box sides such as `3x2`; missing sides are 1.
    #[arg(long)]
    pub lattice: String,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Draw this many seeded (x < 0, y in [-3, 1], β in [0, 3]) points
    /// instead of a single one.
    #[arg(long, conflicts_with_all = ["x", "y", "beta"])]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Py,
    Stability,
    Trees,
}

#[derive(Debug, Args)]
pub struct InequalityArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Number of random tree-graph instances.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Largest set size for the stability suite.
    #[arg(long, default_value_t = 4)]
    pub max_sites: usize,
    /// Largest tree size for the tree suite.
    #[arg(long, default_value_t = 6)]
    pub max_vertices: usize,
}

#[derive(Debug, Args)]
pub struct TreesArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 6)]
    pub nmax: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long)]
    pub nmax: usize,
    /// JSON file of externally known counts, e.g. `{"d": 2, "counts": {"13": 1903890}}`.
    #[arg(long)]
    pub known: Option<PathBuf>,
    /// Worker threads for enumeration; defaults to all cores.
    #[arg(long)]
    pub workers: Option<usize>,
}
