//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orlicz_core::gagliardo::Region;
use orlicz_core::young::{IndexRegime, Regime};

/// Numerical toolkit for Orlicz and fractional Orlicz–Sobolev spaces.
///
/// Young functions are given as `power:P`, `powerlog:p=P,alpha=A[,p0=..,alpha0=..,t0=..]`,
/// `tabulated:t:a;t:a;...[;inf]` or tabulated JSON. Functions are given as
/// `chi:a,b`, `tent:a,b`, `bump:a,b`, `power:e`, `steps:v1,v2,...`,
/// `disk:r`, `cone:r` or `csv:PATH`.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on a
/// usage or input error.
#[derive(Debug, Parser)]
#[command(name = "orlicz-kit", version)]
pub struct Cli {
    /// Flat JSON configuration (keys: seed, trials, tolerances, n, s,
    /// p_range, alpha_range, output); flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Root seed for suites and Monte Carlo sampling [default: 42].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory receiving report.json, trials.csv and plots.csv. Suites
    /// default to `orlicz-report`; other commands only print unless set.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Write the grid produced by the command (if any) as CSV.
    #[arg(long, global = true, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Young functions: values, conjugates, indices, comparison.
    #[command(subcommand)]
    Young(YoungOp),
    /// Optimal targets: integral conditions, H, A_{n/s}, Â, compactness.
    #[command(subcommand)]
    Target(TargetOp),
    /// Luxemburg, Orlicz–Lorentz and Lorentz–Zygmund norms.
    #[command(subcommand)]
    Norm(NormOp),
    /// Rearrangements.
    #[command(subcommand)]
    Rearrange(RearrangeOp),
    /// One-dimensional Hardy-type operators and target norm checks.
    #[command(subcommand)]
    Hardy(HardyOp),
    /// Fractional modulars, seminorms and inequalities.
    #[command(subcommand)]
    Frac(FracOp),
    /// Extension operators.
    #[command(subcommand)]
    Extend(ExtendOp),
    /// Randomized verification suites: `all` runs the acceptance suites.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct YoungArg {
    /// Young function A.
    #[arg(long = "A", value_name = "SPEC")]
    pub a: String,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    /// Dimension n [default: 1].
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Smoothness s in (0, n).
    #[arg(long)]
    pub s: f64,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Function spec.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub f: String,
    /// Domain `lo,hi` or `x0,x1,y0,y1` overriding the function's default.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Cells per axis for sampled functions.
    #[arg(long, default_value_t = 64)]
    pub cells: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    Global,
    NearZero,
    NearInfinity,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Global => Regime::Global,
            RegimeArg::NearZero => Regime::NearZero,
            RegimeArg::NearInfinity => Regime::NearInfinity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum IndexRegimeArg {
    Global,
    NearInfinity,
}

impl From<IndexRegimeArg> for IndexRegime {
    fn from(r: IndexRegimeArg) -> Self {
        match r {
            IndexRegimeArg::Global => IndexRegime::Global,
            IndexRegimeArg::NearInfinity => IndexRegime::NearInfinity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegionArg {
    Domain,
    Whole,
}

impl From<RegionArg> for Region {
    fn from(r: RegionArg) -> Self {
        match r {
            RegionArg::Domain => Region::Domain,
            RegionArg::Whole => Region::Whole,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum YoungOp {
    /// A(t) at the given points.
    Eval {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
    },
    /// The complementary function Ã at the given points.
    Conjugate {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
        /// Include Ã in the tabulated JSON form.
        #[arg(long)]
        export: bool,
    },
    /// Upper Matuszewska-type index.
    Index {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long, value_enum, default_value_t = IndexRegimeArg::Global)]
        regime: IndexRegimeArg,
    },
    /// Whether A dominates B, and whether B grows essentially more slowly.
    Compare {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long = "B", value_name = "SPEC")]
        b: String,
        #[arg(long, value_enum, default_value_t = RegimeArg::Global)]
        regime: RegimeArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum TargetOp {
    /// Integral conditions at zero and at infinity.
    Check {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        dim: DimArgs,
    },
    /// The auxiliary function H.
    #[command(name = "H")]
    H {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        dim: DimArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
        /// Build even when a condition is numerically indeterminate.
        #[arg(long)]
        allow_indeterminate: bool,
    },
    /// The optimal Orlicz target A_{n/s}.
    SobolevConjugate {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        dim: DimArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
        #[arg(long)]
        allow_indeterminate: bool,
        /// Include the function in the tabulated JSON form.
        #[arg(long)]
        export: bool,
    },
    /// The Orlicz–Lorentz target function Â.
    Hat {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        dim: DimArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
        #[arg(long)]
        allow_indeterminate: bool,
        #[arg(long)]
        export: bool,
    },
    /// Whether B grows essentially more slowly than A_{n/s}.
    Compact {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long = "B", value_name = "SPEC")]
        b: String,
        #[command(flatten)]
        dim: DimArgs,
        #[arg(long)]
        allow_indeterminate: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum NormOp {
    Luxemburg {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        f: FunctionArgs,
    },
    OrliczLorentz {
        #[command(flatten)]
        a: YoungArg,
        /// Exponent q of the weight.
        #[arg(long)]
        q: f64,
        /// Use the maximal-average (dual) form.
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        f: FunctionArgs,
    },
    LorentzZygmund {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Total measure [default: measure of the function's domain].
        #[arg(long)]
        total: Option<f64>,
        #[command(flatten)]
        f: FunctionArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum RearrangeOp {
    /// Decreasing rearrangement u*.
    Star {
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Maximal average u**.
    Doublestar {
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Symmetric decreasing rearrangement.
    Symmetric {
        #[command(flatten)]
        f: FunctionArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum HardyOp {
    /// T_s f on the grid of f.
    Ts {
        #[command(flatten)]
        dim: DimArgs,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Modular inequality with constant 1/s.
    Down {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Modular inequality for the tail operator, with a found constant.
    Up {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        dim: DimArgs,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Orlicz target norm bound for T_s.
    #[command(name = "thmA")]
    ThmA {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        dim: DimArgs,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Orlicz–Lorentz target norm bound for T_s.
    #[command(name = "thmB")]
    ThmB {
        #[command(flatten)]
        a: YoungArg,
        #[command(flatten)]
        dim: DimArgs,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Radial test function built from a non-increasing f.
    Testfn {
        #[command(flatten)]
        dim: DimArgs,
        /// Order m of the integral.
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Cells per axis of the output grid.
        #[arg(long, default_value_t = 64)]
        grid_cells: usize,
        #[command(flatten)]
        f: FunctionArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum FracOp {
    /// Fractional modular at scale λ.
    Modular {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[arg(long, value_enum, default_value_t = RegionArg::Domain)]
        region: RegionArg,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Gagliardo–Luxemburg seminorm.
    Seminorm {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[arg(long, value_enum, default_value_t = RegionArg::Domain)]
        region: RegionArg,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Pólya–Szegő: the modular does not increase under symmetrization.
    Polya {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Fractional Hardy inequality on the whole space.
    HardyRn {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Poincaré inequality with the mean.
    Poincare {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Embedding into the optimal Orlicz and Orlicz–Lorentz targets.
    Embed {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Scaled seminorm modulars as s → 1.
    Bbm {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.99,0.999")]
        s_list: Vec<f64>,
        #[command(flatten)]
        f: FunctionArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExtendOp {
    /// Extension by zero of u supported in E.
    Zero {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        /// The set E containing the support of u.
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// Ambient domain containing the grid's domain.
        #[arg(long, allow_hyphen_values = true)]
        ambient: String,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Even reflection across x = 0 (or y = 0 in 2-D).
    Reflect {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Multiplication by a Lipschitz cutoff.
    Cutoff {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        /// `const:c`, `ramp:cx,cy,height,slope` or `step:start,end`.
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Extension of a function on (0, 1) to the line.
    Pipeline {
        #[command(flatten)]
        a: YoungArg,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        f: FunctionArgs,
    },
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// `all` or a suite name (see `--list`).
    #[arg(required_unless_present = "list")]
    pub name: Option<String>,
    /// Trials per suite, overriding each suite's own count.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Print the suite names and exit.
    #[arg(long)]
    pub list: bool,
}
