use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use outflow_cli::commands::{self, ConstructKind};
use outflow_cli::config::{LoadedConfig, Suite};
use outflow_cli::CliError;

/// Wave patterns, simulations and verification suites for the 1D
/// Navier-Stokes outflow problem.
#[derive(Parser)]
#[command(name = "outflow", version)]
struct Cli {
    /// TOML experiment configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (construct, verify) or directory (simulate).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Only print failures and errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a wave pattern at time t and write it as a table.
    Construct {
        #[arg(value_enum)]
        kind: KindArg,
        /// Evaluation time on the simulation axis.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// Run the configured scenario and write snapshots and a summary.
    Simulate,
    /// Run a verification suite (all suites listed in the config if omitted).
    Verify {
        #[arg(value_enum)]
        suite: Option<SuiteArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Rarefaction,
    Smoothed,
    Stationary,
    Superposition,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Burgers,
    Srw,
    Stationary,
    Decay,
    Entropy,
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
    let loaded = LoadedConfig::from_file(path)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Construct { kind, t } => {
            let kind = match kind {
                KindArg::Rarefaction => ConstructKind::Rarefaction,
                KindArg::Smoothed => ConstructKind::Smoothed,
                KindArg::Stationary => ConstructKind::Stationary,
                KindArg::Superposition => ConstructKind::Superposition,
            };
            commands::construct(&loaded, kind, *t, out, cli.quiet)
        }
        Command::Simulate => commands::simulate(&loaded, out, cli.quiet).map(|_| ()),
        Command::Verify { suite } => {
            let suite = suite.map(|s| match s {
                SuiteArg::Burgers => Suite::Burgers,
                SuiteArg::Srw => Suite::Srw,
                SuiteArg::Stationary => Suite::Stationary,
                SuiteArg::Decay => Suite::Decay,
                SuiteArg::Entropy => Suite::Entropy,
            });
            commands::verify(&loaded, suite, out, cli.quiet).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        // output piped into a closed reader, e.g. `| head`
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
