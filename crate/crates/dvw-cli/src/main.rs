use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dvw_cli::commands::{self, CliError, DEFAULT_ORDERS, VERIFY_POINTS};
use dvw_cli::RunConfig;

#[derive(Parser)]
#[command(name = "dvw", version, about = "SBP-SAT solver for the diffusive viscous wave equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the SBP identities, exactness and borrowing bounds of the operators.
    VerifyOps {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ORDERS)]
        orders: Vec<usize>,
        #[arg(long, default_value_t = VERIFY_POINTS)]
        n: usize,
    },
    /// Integrate one problem and write snapshots and the energy history.
    Solve {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a manufactured-solution or self-convergence study.
    Convergence {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate admissible roots and scan the determinant condition.
    NormalMode {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the parsed config with defaults filled in.
    ShowConfig { config: PathBuf },
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    Ok(RunConfig::load(path)?)
}

fn run(cli: Cli) -> Result<String, CliError> {
    commands::configure_threads(std::env::var("DVW_THREADS").ok())?;
    match cli.command {
        Command::VerifyOps { orders, n } => Ok(commands::verify_ops(&orders, n)?.1.report),
        Command::Solve { config, out } => Ok(commands::solve(&load(&config)?, out.as_deref())?.report),
        Command::Convergence { config, out } => Ok(commands::convergence(&load(&config)?, out.as_deref())?.1.report),
        Command::NormalMode { config, out } => Ok(commands::normal_mode(&load(&config)?, out.as_deref())?.report),
        Command::ShowConfig { config } => Ok(load(&config)?.resolved(None).to_toml()),
    }
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
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
