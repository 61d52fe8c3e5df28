//! `projsphere`: batch runs of the witness engine, the diagonal double-sphere
//! oracle and the invariant self-tests.

mod commutative;
mod config;
mod refute;
mod report;
mod selftest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{AlgebraKind, ConfigError, Dims, Format};
use report::Report;

/// Exit code for invalid configuration.
pub const EXIT_CONFIG: u8 = 2;
/// Exit code when some instance or suite fails.
pub const EXIT_FAILED: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "projsphere", version, about = "Certificates for the double-sphere characterization of projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the witness engine over seeded random instances.
    Refute {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Dimensions, e.g. `2..4` or `2,3,6`.
        #[arg(long, default_value = "2..4")]
        dims: Dims,
        /// Instances per dimension.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = projsphere::witness::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = projsphere::witness::DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long, value_enum, default_value_t = AlgebraKind::FullMatrix)]
        algebra: AlgebraKind,
        /// JSON file `{"p": ..., "b": ...}` to check instead of random instances.
        #[arg(long)]
        instance: Option<std::path::PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Diagonal algebras: double spheres of all projections and of sampled
    /// non-projections on a grid.
    Commutative {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "1..4")]
        dims: Dims,
        /// Sampled non-projections per dimension.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 64)]
        grid_res: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Comma-separated suite names; all suites when omitted.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
        /// Corrupt witness certificates before verification (failure fixture).
        #[arg(long)]
        tamper: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn run(cli: Cli) -> Result<bool, ConfigError> {
    config::init_workers()?;
    match cli.command {
        Command::Refute {
            seed,
            dims,
            count,
            tol,
            margin,
            algebra,
            instance,
            output,
        } => {
            let cfg = refute::RefuteConfig::new(seed, dims, count, tol, margin, algebra, instance)?;
            let rep = refute::run(&cfg)?;
            report::emit(&output, &rep)?;
            Ok(rep.all_ok())
        }
        Command::Commutative {
            seed,
            dims,
            count,
            grid_res,
            output,
        } => {
            let cfg = commutative::CommutativeConfig::new(seed, dims, count, grid_res)?;
            let rep = commutative::run(&cfg)?;
            report::emit(&output, &rep)?;
            Ok(rep.all_ok())
        }
        Command::Selftest {
            seed,
            suites,
            tamper,
            output,
        } => {
            let cfg = selftest::SelftestConfig::new(seed, suites, tamper)?;
            let rep = selftest::run(&cfg);
            report::emit(&output, &rep)?;
            Ok(rep.all_ok())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("projsphere: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
