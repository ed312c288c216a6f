//! `gcs`: build, verify and measure Golay complementary sets.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
//! 3 work-size bound exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcs_core::pmepr::DEFAULT_OVERSAMPLING;

#[derive(Debug, Parser)]
#[command(
    name = "gcs",
    version,
    about = "Golay complementary sets from extended Boolean functions"
)]
struct Cli {
    /// Directory for outputs written without an explicit --output.
    #[arg(long, env = "GCS_OUT_DIR", global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a (q, p^k, L) set and verify it.
    Generate(GenerateArgs),
    /// Check the complementary property of a set read from a file.
    Verify(InputArgs),
    /// Per-member PMEPR of a set read from a file.
    Pmepr(PmeprArgs),
    /// Construct and check many randomly drawn sets.
    Sweep(SweepArgs),
    /// Emit the vendored reference artifacts.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long = "L", value_name = "L")]
    length: Option<usize>,
    /// Images of 1..m-1, comma separated; pi(1) must be 1.
    #[arg(long, value_delimiter = ',')]
    pi: Option<Vec<usize>>,
    /// ANF text over m-1 variables, e.g. `3:1,1`.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, value_delimiter = ',')]
    c: Option<Vec<u64>>,
    #[arg(long = "c-prime")]
    c_prime: Option<u64>,
    /// Draw every parameter not given explicitly from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON file with any of p, q, L, pi, g, c, c_prime, seed; flags win.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Absolute sidelobe tolerance; defaults to 1e-9 * M * L.
    #[arg(long)]
    tol: Option<f64>,
    /// Drop repeated sequences before writing and verifying.
    #[arg(long)]
    dedupe: bool,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// JSON set document, or a headerless CSV matrix (`.csv`, needs --q).
    #[arg(long, short, value_name = "FILE")]
    input: PathBuf,
    /// Alphabet size of a CSV input.
    #[arg(long)]
    q: Option<u64>,
    /// Absolute sidelobe tolerance; defaults to 1e-9 * M * L.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct PmeprArgs {
    #[arg(long, short, value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLING)]
    oversampling: usize,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5])]
    p: Vec<u64>,
    #[arg(long = "q-mult", value_delimiter = ',', default_values_t = [1, 2, 3])]
    q_mult: Vec<u64>,
    /// Smallest length drawn; defaults to p for each draw.
    #[arg(long = "L-min", value_name = "L")]
    length_min: Option<usize>,
    #[arg(long = "L-max", value_name = "L", default_value_t = 200)]
    length_max: usize,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLING)]
    oversampling: usize,
    /// Sidelobe tolerance as a multiple of M * L.
    #[arg(long = "tol-factor", default_value_t = 1e-9)]
    tol_factor: f64,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Table1,
    Fig1,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out_dir = cli.out_dir.as_deref();
    let result = match &cli.command {
        Command::Generate(args) => commands::generate(args, out_dir),
        Command::Verify(args) => commands::verify(args),
        Command::Pmepr(args) => commands::pmepr(args, out_dir),
        Command::Sweep(args) => commands::sweep(args, out_dir),
        Command::Reproduce(args) => commands::reproduce(args, out_dir),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
