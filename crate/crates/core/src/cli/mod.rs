//! Command-line front end.

/// `println!` that ignores a closed stdout (e.g. output piped into `head`).
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

mod commands;
pub mod config;
pub mod output;
mod verify;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

use crate::error::Error;
pub use config::{ConfigError, OutputFormat, Overrides, RunConfig};

/// Exit status for a run whose hierarchy or verification checks failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for bad flags, config files or parameter combinations.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for numerical failures during a run.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "double-well",
    version,
    about = "Ground state of V = (g^2/2)(x^2-1)^2(x^2+a) by monotone iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate to convergence and write the energies and wavefunctions.
    Solve,
    /// Recompute a published energy table and diff it against the printed values.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
    },
    /// Trace the convergence-region curves, a_c and a_g(g).
    Region {
        /// Samples of `a` per curve.
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Finite-difference reference energy and wavefunction.
    Oracle,
    /// Run every built-in check; exit 0 only if all pass.
    Verify,
}

/// Anything that ends a command early.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numeric(Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::ConvergenceDomain { .. }
            | Error::Grid(_)
            | Error::NegativeCoordinate(_) => Self::Config(ConfigError::Invalid(e)),
            other => Self::Numeric(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numeric(_) | Self::Io(_) => EXIT_NUMERIC,
        }
    }
}

/// Whether the command's own checks passed.
pub(crate) type Outcome = Result<bool, CliError>;

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(true) => 0,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

fn dispatch(cli: &Cli) -> Outcome {
    let cfg = RunConfig::resolve(&cli.overrides)?;
    match cli.command {
        Command::Solve => commands::solve(&cfg),
        Command::Table { which } => commands::table(&cfg, which),
        Command::Region { resolution } => commands::region(&cfg, resolution),
        Command::Oracle => commands::oracle(&cfg),
        Command::Verify => verify::verify(&cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let cfg: CliError = Error::Grid("x".into()).into();
        assert_eq!(cfg.exit_code(), EXIT_CONFIG);
        let num: CliError = Error::DegenerateDenominator(0.0).into();
        assert_eq!(num.exit_code(), EXIT_NUMERIC);
    }

    #[test]
    fn bad_flags_exit_two() {
        assert_eq!(run(["double-well", "solve", "--bc", "III"]), EXIT_CONFIG);
        assert_eq!(run(["double-well", "table", "4"]), EXIT_CONFIG);
    }
}
