//! Command-line surface for the Dirac-Coulomb SUSY bound-state solver.
//!
//! Subcommands: `spectrum` (closed-form level table), `wavefunction`
//! (sampled radial pair of one level), `verify` (internal identity
//! checks), `compare` (closed form vs finite-difference oracle).
//!
//! Exit codes: 0 success, 1 failed verification check, 2 physics-domain
//! error (the requested state does not exist), 3 numeric degeneracy.
//! Data goes to stdout, diagnostics to stderr.

// `!(x > 0.0)` rejects NaN along with the out-of-domain values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod verify;

use clap::{Args, Parser, Subcommand};
use config::{CommonArgs, RunConfig};
use dirac_susy::Error;

#[derive(Debug)]
pub enum AppError {
    Core(Error),
    Usage(String),
    VerifyFailed,
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Core(e)
    }
}

fn error_label(e: &Error) -> &'static str {
    match e {
        Error::NonBindingChannel { .. } => "NonBindingChannel",
        Error::DegenerateTransform { .. } => "DegenerateTransform",
        Error::NoBoundState { .. } => "NoBoundState",
        Error::NonConvergence { .. } => "NonConvergence",
        Error::OriginSingularity { .. } => "OriginSingularity",
        Error::PoleAtOne => "PoleAtOne",
        Error::IrregularResult { .. } => "IrregularResult",
        Error::UnboundState { .. } => "UnboundState",
        Error::DepthLimit { .. } => "DepthLimit",
        Error::DegenerateKPlus => "DegenerateKPlus",
        Error::DivergentNorm { .. } => "DivergentNorm",
        Error::Domain(_) => "Domain",
        Error::IndexOutOfSpectrum { .. } => "IndexOutOfSpectrum",
        Error::GridTooSmall { .. } => "GridTooSmall",
        Error::NoRootBracketed => "NoRootBracketed",
    }
}

#[derive(Parser)]
#[command(
    name = "dirac-susy",
    version,
    about = "Bound states of the radial Dirac equation with vector and scalar Coulomb potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Test hook: inject a controlled fault (kinds: remainder)
    #[arg(long = "inject-fault", hide = true)]
    inject_fault: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form bound-state energy table
    Spectrum(CommonArgs),
    /// Sampled radial wavefunction of one level
    Wavefunction(CommonArgs),
    /// Run the internal consistency checks
    Verify(VerifyArgs),
    /// Closed-form vs finite-difference oracle energies
    Compare(CommonArgs),
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Spectrum(args) => commands::run_spectrum(&RunConfig::from(&args)),
        Command::Wavefunction(args) => commands::run_wavefunction(&RunConfig::from(&args)),
        Command::Compare(args) => commands::run_compare(&RunConfig::from(&args)),
        Command::Verify(args) => {
            let fault = args.inject_fault.as_deref().map(verify::Fault::parse).transpose()?;
            verify::run_verify(&RunConfig::from(&args.common), fault)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(AppError::VerifyFailed) => {
            eprintln!("error[VerifyFailed]: one or more checks failed");
            1
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("error[Usage]: {msg}");
            2
        }
        Err(AppError::Core(e)) => {
            eprintln!("error[{}]: {e}", error_label(&e));
            if let Error::GridTooSmall { .. } = e {
                eprintln!("hint: enlarge the oracle box with --rmax and/or --points");
            }
            if e.is_physics_domain() {
                2
            } else {
                3
            }
        }
    };
    std::process::exit(code);
}
