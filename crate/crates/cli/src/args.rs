//! Command-line grammar. Values stay strings here; [`crate::config`] parses
//! and validates them together so every problem is reported at once.

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ffr", version, about = "Fourier restriction experiments over F_p^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family instance and write its set file.
    BuildSet {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fourier transform of a surface measure, a set file or a function CSV.
    Transform {
        #[command(flatten)]
        family: FamilyArgs,
        /// Set file or function CSV to transform instead of a family.
        #[arg(long)]
        input: Option<String>,
        /// forward or inverse
        #[arg(long)]
        direction: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Averaged norms of the transform over a grid of exponents.
    SalemProfile {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        grids: GridArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Least-squares Salem exponents across field sizes.
    SalemFit {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        grids: GridArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact restriction thresholds for a family or for explicit (d, α, p, s).
    Exponents {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long = "p-exp")]
        p_exp: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long = "s-inf")]
        s_inf: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Extension-norm lower bound at one field size.
    ExtNorm {
        #[command(flatten)]
        family: FamilyArgs,
        /// Set file to use instead of a family.
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Extension-norm growth across field sizes, one fit per q.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        grids: GridArgs,
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the invariant suites.
    Verify {
        /// Comma-separated suite names; all suites when absent.
        #[arg(long)]
        suite: Option<String>,
        /// Conjugate χ(1) in the character table of the fourier suite.
        #[arg(long = "inject-fault")]
        inject_fault: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args, Default)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: Option<String>,
    /// Field size
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub density: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct GridArgs {
    #[arg(long = "field-sizes")]
    pub field_sizes: Option<String>,
    #[arg(long = "p-grid")]
    pub p_grid: Option<String>,
    #[arg(long = "q-grid")]
    pub q_grid: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct ExtArgs {
    /// Seeds of the random starts, comma-separated.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// key=value defaults; flags on the command line win.
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Largest number of points a space may have.
    #[arg(long)]
    pub cap: Option<String>,
    /// Worker threads; overrides FFR_THREADS.
    #[arg(long)]
    pub threads: Option<String>,
    /// Record the wall-clock time in the envelope (breaks byte-identical reruns).
    #[arg(long)]
    pub timestamp: bool,
}
