use std::path::PathBuf;
use std::process::ExitCode;

use bjj::config::Settings;
use bjj::run;
use bjj::CliError;
use clap::{Parser, Subcommand};

/// Exact and Gaussian phase-model dynamics of a bosonic Josephson junction.
#[derive(Debug, Parser)]
#[command(name = "bjj", version)]
struct Cli {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Witness and covariance trajectory of one quench.
    Evolve(Settings),
    /// Minimum ζ², short-time coefficients and R over a Λ grid.
    Sweep(Settings),
    /// Wigner grids at snapshot times, plus the separatrix for Λ > 1.
    Wigner(Settings),
    /// One-axis twisting against the exact dynamics at equal χ.
    OatCompare(Settings),
    /// Short-time polynomial fit of ζ².
    Fit(Settings),
}

fn execute(cli: Cli) -> anyhow::Result<Vec<PathBuf>> {
    let file = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let files = match cli.command {
        Command::Evolve(flags) => {
            let s = flags.or(file);
            run::run_evolve(&s.run_config()?, s.fit_protocol()?, &s.out_dir())?
        }
        Command::Sweep(flags) => {
            let s = flags.or(file);
            run::run_sweep(&s.sweep_config()?, s.workers(), &s.out_dir())?
        }
        Command::Wigner(flags) => {
            let s = flags.or(file);
            let cfg = s.run_config()?;
            let snapshots = s
                .snapshots
                .clone()
                .unwrap_or_else(|| vec![0.0, 0.5 * cfg.t_max, cfg.t_max]);
            run::run_wigner(&cfg, &snapshots, s.separatrix, &s.out_dir())?
        }
        Command::OatCompare(flags) => {
            let s = flags.or(file);
            run::run_oat_compare(&s.run_config()?, &s.out_dir())?
        }
        Command::Fit(flags) => {
            let s = flags.or(file);
            let lambda = s
                .lambda
                .ok_or_else(|| CliError::Config("--lambda is required".into()))?;
            let params = bjj_core::ModelParams::from_lambda(s.n_particles(), lambda)
                .map_err(|e| CliError::Config(e.to_string()))?;
            run::run_fit(
                &params,
                &s.initial_state()?,
                s.fit_protocol()?,
                s.format.unwrap_or_default(),
                &s.out_dir(),
            )?
        }
    };
    Ok(files)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            if code == 1 {
                eprintln!("run `bjj <command> --help` for usage");
            }
            ExitCode::from(code)
        }
    }
}
