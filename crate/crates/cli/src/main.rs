//! `pdmoments`: moment recurrences, vanishing bounds, generating-function
//! checks and jump reconstruction from the command line.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 a mathematical
//! precondition does not hold, 3 a verification found a mismatch.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "pdmoments", version, about = "Moments of piecewise solutions of linear ODEs")]
struct Cli {
    /// Emit `key=value` lines instead of aligned tables.
    #[arg(long, global = true)]
    porcelain: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds on the number of vanishing leading moments.
    Bound {
        #[arg(long)]
        operator: PathBuf,
        /// Number of interior jumps.
        #[arg(long)]
        p: usize,
        /// Piecewise spec whose interval decides the regular bound.
        #[arg(long)]
        signal: Option<PathBuf>,
        /// Moments whose leading zeros are counted as a certificate.
        #[arg(long)]
        moments: Option<PathBuf>,
    },
    /// Check the moment recurrence against jump data.
    Verify {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        moments: PathBuf,
        #[arg(long)]
        jumps: PathBuf,
        /// Relative tolerance; omitted or 0 means exact rational arithmetic.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Moments m_0 ..= m_K of a piecewise signal.
    Moments {
        #[arg(long)]
        signal: PathBuf,
        /// Needed when the signal has initial-value pieces.
        #[arg(long)]
        operator: Option<PathBuf>,
        /// Last moment index K.
        #[arg(long = "order", value_name = "K")]
        order: usize,
        /// Accuracy target for initial-value pieces.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// The moment recurrence of an operator, optionally run forward.
    Recurrence {
        #[arg(long)]
        operator: PathBuf,
        /// Seed moments for forward generation.
        #[arg(long, requires_all = ["jumps", "order"])]
        moments: Option<PathBuf>,
        #[arg(long, requires_all = ["moments", "order"])]
        jumps: Option<PathBuf>,
        /// Last moment index K to generate.
        #[arg(long = "order", value_name = "K", requires_all = ["moments", "jumps"])]
        order: Option<usize>,
    },
    /// Check the ODE satisfied by the moment generating function.
    MgfCheck {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        moments: PathBuf,
        #[arg(long)]
        jumps: PathBuf,
        /// Number of tail coefficients compared.
        #[arg(long = "order", value_name = "K")]
        order: usize,
        /// Relative tolerance; omitted or 0 means exact rational arithmetic.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Recover jump locations and jump vectors from moments.
    Reconstruct {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        moments: PathBuf,
        /// Largest number of interior jumps allowed.
        #[arg(long)]
        pmax: usize,
        /// Also evaluate the rebuilt signal on `a:b:step`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Worked example for the Legendre operator of degree m.
    DemoLegendre { m: usize },
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    let porcelain = cli.porcelain;
    match cli.command {
        Command::Bound { operator, p, signal, moments } => {
            commands::bound(&operator, p, signal.as_deref(), moments.as_deref(), porcelain)
        }
        Command::Verify { operator, moments, jumps, tol } => commands::verify(&operator, &moments, &jumps, tol, porcelain),
        Command::Moments { signal, operator, order, tol } => commands::moments(&signal, operator.as_deref(), order, tol),
        Command::Recurrence { operator, moments, jumps, order } => {
            let forward = match (moments, jumps, order) {
                (Some(m), Some(j), Some(k)) => Some((m, j, k)),
                _ => None,
            };
            commands::recurrence(&operator, forward.as_ref().map(|(m, j, k)| (m.as_path(), j.as_path(), *k)), porcelain)
        }
        Command::MgfCheck { operator, moments, jumps, order, tol } => {
            commands::mgf_check(&operator, &moments, &jumps, order, tol, porcelain)
        }
        Command::Reconstruct { operator, moments, pmax, grid } => {
            commands::reconstruct(&operator, &moments, pmax, grid.as_deref(), porcelain)
        }
        Command::DemoLegendre { m } => commands::demo_legendre(m, porcelain),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(3)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
