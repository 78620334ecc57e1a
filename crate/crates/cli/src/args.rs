use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kaudit", version, about = "Kantorovich-type constants, s-convexity certificates and operator-inequality audits")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K_f, K_f^d or K_log with the regime and condition slacks.
    Constants(ConstantsArgs),
    /// Grid certificate of s-convexity, optionally the largest certified s.
    Certify(CertifyArgs),
    /// Evaluate one inequality on a matrix from a file.
    Verify(VerifyArgs),
    /// Seeded random campaign over the verifiers.
    Fuzz(FuzzArgs),
    /// Feasible upper endpoints for the power-function window condition.
    Feasible(FeasibleArgs),
    /// Recompute the numerical remark on the logarithm.
    ReproduceRemark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantForm {
    /// K_f, or the endpoint constant for 0 < q < 1.
    Ratio,
    /// K_f^d, or the endpoint constant for 0 < q < 1.
    Diff,
    /// K_log(1, M, q).
    Log,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Lower end of the spectral window.
    #[arg(long = "m", allow_negative_numbers = true)]
    pub lower: f64,
    /// Upper end of the spectral window.
    #[arg(long = "M", allow_negative_numbers = true)]
    pub upper: f64,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// Function: pow:<r> or log:<base>.
    #[arg(long = "f")]
    pub function: String,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = ConstantForm::Ratio)]
    pub form: ConstantForm,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long = "f")]
    pub function: String,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Exponent to certify; omit together with --max-s.
    #[arg(long)]
    pub s: Option<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    /// Also search for the largest certified s.
    #[arg(long)]
    pub max_s: bool,
    /// Also estimate theta for the logarithm with this alpha floor.
    #[arg(long)]
    pub theta_eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// jensen, ratio, diff, holder, order, classical or norm-radius.
    #[arg(long)]
    pub check: String,
    /// Matrix file: {"n": int, "rows": [[...]]}.
    #[arg(long = "A")]
    pub a: Option<PathBuf>,
    /// Second matrix for the order check.
    #[arg(long = "B")]
    pub b: Option<PathBuf>,
    /// Unit vector file; by default both extreme eigenvectors plus --samples
    /// random vectors are used.
    #[arg(long)]
    pub x: Option<PathBuf>,
    #[arg(long = "f")]
    pub function: Option<String>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Widen the window to (m/pad, M*pad).
    #[arg(long, default_value_t = 1.0)]
    pub pad: f64,
    #[arg(long, default_value_t = 2)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instead of a matrix file, search diag(m, M) for the tightest unit
    /// vector with this many random restarts.
    #[arg(long)]
    pub search: Option<usize>,
    #[arg(long = "m")]
    pub lower: Option<f64>,
    #[arg(long = "M")]
    pub upper: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instances per check.
    #[arg(long, default_value_t = 100)]
    pub instances: u64,
    /// A check id or group (ratio, diff, holder, order, classical, all); repeatable.
    #[arg(long = "check", default_value = "all")]
    pub checks: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = 2)]
    pub min_dim: usize,
    #[arg(long, default_value_t = 16)]
    pub max_dim: usize,
    #[arg(long, default_value_t = 100.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 33)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.0)]
    pub pad: f64,
    #[arg(long, default_value_t = 20)]
    pub failure_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowForm {
    Ratio,
    Diff,
}

#[derive(Debug, Args)]
pub struct FeasibleArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    /// Fixed lower endpoint.
    #[arg(long = "m", default_value_t = 1.0)]
    pub lower: f64,
    #[arg(long, value_enum, default_value_t = WindowForm::Ratio)]
    pub form: WindowForm,
}
