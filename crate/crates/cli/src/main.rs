//! `p4ell` — reproducible file-based pipelines over the library.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 invalid input.  Every
//! command builds its outputs in memory and writes them only on success,
//! so failed runs leave no partial primary files.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "p4ell", version, about = "Elliptic asymptotics of fourth Painlevé transcendents")]
struct Cli {
    /// Optional config file with `key = value` lines (JSON-compatible
    /// values); explicit flags override config entries.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Boutroux trajectory over a φ-grid (CSV + JSON, optional SVG).
    Trajectory(commands::TrajectoryArgs),
    /// Periods and Boutroux integrals of one curve (JSON).
    Periods(commands::PeriodsArgs),
    /// Trace the Stokes graph (SVG + adjacency JSON).
    Stokes(commands::StokesArgs),
    /// Phase shift and representation data for given Stokes data (JSON).
    PhaseShift(commands::PhaseShiftArgs),
    /// Evaluate y(x) along the ray (CSV; poles marked).
    Evaluate(commands::EvaluateArgs),
    /// Integrate P_IV against the representation (residual CSV + exponent).
    Verify(commands::VerifyArgs),
    /// Run all identity suites; exit 0 iff all pass.
    Identities(commands::IdentitiesArgs),
    /// Brute-force Boutroux oracle scan (JSON).
    OracleScan(commands::OracleScanArgs),
}

fn main() {
    let cli = Cli::parse();
    let cfg = match config::Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            std::process::exit(2);
        }
    };
    let result = match cli.command {
        Command::Trajectory(a) => commands::trajectory(a, &cfg),
        Command::Periods(a) => commands::periods(a, &cfg),
        Command::Stokes(a) => commands::stokes(a, &cfg),
        Command::PhaseShift(a) => commands::phase_shift(a, &cfg),
        Command::Evaluate(a) => commands::evaluate(a, &cfg),
        Command::Verify(a) => commands::verify(a, &cfg),
        Command::Identities(a) => commands::identities(a, &cfg),
        Command::OracleScan(a) => commands::oracle_scan(a, &cfg),
    };
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<commands::InvalidInput>().is_some() {
                2
            } else {
                1
            };
            std::process::exit(code);
        }
    }
}
