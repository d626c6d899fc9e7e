//! `chball` — command-line front end for the complex hyperbolic ball
//! toolkit: bounds tables, randomized verification suites, approximation
//! demos, matrix classification, and the (quality, displacement) optimizer.
//!
//! Every command is deterministic given its flags and seed; CSV and
//! json-lines output is byte-identical across runs once the timestamp
//! header is suppressed with `--no-header`. Exit codes: 0 success, 1
//! verification/validation failure, 2 usage or parse error.

mod cmds;
mod output;

use clap::{Parser, Subcommand, ValueEnum};

use chball::approx::ApproxMode;
use chball::bounds::OmegaConvention;
use output::Format;

impl Format {
    fn label(&self) -> &'static str {
        match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::JsonLines => "json-lines",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    /// IEEE double (10 significant digits printed).
    Double,
    /// 192-bit extended values, printed with 50 significant digits.
    Extended,
}

impl PrecisionArg {
    fn label(&self) -> &'static str {
        match self {
            PrecisionArg::Double => "double",
            PrecisionArg::Extended => "extended",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Divide out one eigenvalue phase before approximating.
    Projective,
    /// Approximate every eigenvalue angle.
    FullSpectrum,
}

impl ModeArg {
    fn mode(&self) -> ApproxMode {
        match self {
            ModeArg::Projective => ApproxMode::Projective,
            ModeArg::FullSpectrum => ApproxMode::FullSpectrum,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            ModeArg::Projective => "projective",
            ModeArg::FullSpectrum => "full-spectrum",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OmegaArg {
    /// The sharp threshold, the root of 2w(2w^2+1) = 1 (~0.38546).
    Fh,
    /// The classical 1/(2 sqrt 2) threshold.
    #[value(name = "martin-sqrt")]
    MartinSqrt,
    /// The classical 2 - sqrt 3 threshold.
    #[value(name = "martin-2s3")]
    Martin2s3,
}

impl OmegaArg {
    fn convention(&self) -> OmegaConvention {
        match self {
            OmegaArg::Fh => OmegaConvention::FriedlandHersonsky,
            OmegaArg::MartinSqrt => OmegaConvention::MartinInvSqrt8,
            OmegaArg::Martin2s3 => OmegaConvention::MartinTwoMinusSqrt3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "chball",
    version,
    about = "Complex hyperbolic ball toolkit: certified bounds, verification suites, \
             approximation demos, and isometry diagnostics"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Suppress the '#' header lines (timestamp and option echo).
    #[arg(long, global = true)]
    no_header: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
pub struct BoundsArgs {
    /// Smallest complex dimension (inclusive).
    #[arg(long, default_value_t = 2)]
    n: u32,

    /// Largest complex dimension (inclusive).
    #[arg(long = "n-max", default_value_t = 12)]
    n_max: u32,

    /// Precision of the printed volume bounds.
    #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,

    /// Threshold convention the bound is compared against.
    #[arg(long, value_enum, default_value_t = OmegaArg::Fh)]
    omega: OmegaArg,
}

#[derive(clap::Args)]
pub struct VerifyArgs {
    /// Suite name (hermitian, isometry, norms, approx, bounds, volume) or
    /// "all".
    #[arg(long, default_value = "all")]
    suite: String,

    /// Sample scale; scaled checks run `base * samples / 1000` cases.
    #[arg(long, default_value_t = 1000)]
    samples: usize,

    /// Run seed every case seed is derived from.
    #[arg(long, default_value_t = 2026)]
    seed: u64,
}

#[derive(clap::Args)]
pub struct ApproxArgs {
    /// Comma-separated angles in [0, 1) to approximate simultaneously;
    /// omit to draw a random unitary instead.
    #[arg(long)]
    thetas: Option<String>,

    /// Approximation quality Q > 1.
    #[arg(long = "Q", default_value_t = 17.0)]
    quality: f64,

    /// Complex dimension for the random-unitary demo (matrix size n+1).
    #[arg(long, default_value_t = 2)]
    n: u32,

    /// Seed for the random-unitary demo.
    #[arg(long, default_value_t = 2026)]
    seed: u64,

    /// Which eigenvalue angles the finite-order approximant matches.
    #[arg(long, value_enum, default_value_t = ModeArg::Projective)]
    mode: ModeArg,
}

#[derive(clap::Args)]
pub struct FileArgs {
    /// Matrix file path, or '-' for stdin.
    file: String,

    /// Form-preservation tolerance for validation.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(clap::Args)]
pub struct OptimizeArgs {
    /// Complex dimension.
    #[arg(long, default_value_t = 2)]
    n: u32,

    /// Lower end of the quality range (exclusive of 1).
    #[arg(long = "Q-min", default_value_t = 2.0)]
    q_min: f64,

    /// Upper end of the quality range.
    #[arg(long = "Q-max", default_value_t = 64.0)]
    q_max: f64,

    /// Bisection tolerance for the displacement solve.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Threshold convention to optimize against.
    #[arg(long, value_enum, default_value_t = OmegaArg::Fh)]
    omega: OmegaArg,

    /// Precision of the printed volume bounds.
    #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
}

#[derive(Subcommand)]
enum Command {
    /// Certified ball-radius, displacement, and volume lower bounds per
    /// dimension.
    Bounds(BoundsArgs),
    /// Run randomized invariant suites with replayable failure seeds.
    Verify(VerifyArgs),
    /// Simultaneous rational approximation and finite-order approximation
    /// demos.
    Approx(ApproxArgs),
    /// Validate a matrix file and print full isometry diagnostics.
    Classify(FileArgs),
    /// Distance-to-unitary certificate for a matrix file.
    Distance(FileArgs),
    /// Maximize the displacement budget over a quality range.
    Optimize(OptimizeArgs),
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Bounds(args) => cmds::bounds(args, cli.format, cli.no_header),
        Command::Verify(args) => cmds::verify_cmd(args, cli.format, cli.no_header),
        Command::Approx(args) => cmds::approx(args, cli.format, cli.no_header),
        Command::Classify(args) => cmds::classify_cmd(args, cli.format, cli.no_header),
        Command::Distance(args) => cmds::distance_cmd(args, cli.format, cli.no_header),
        Command::Optimize(args) => cmds::optimize(args, cli.format, cli.no_header),
    };
    std::process::ExitCode::from(code as u8)
}
