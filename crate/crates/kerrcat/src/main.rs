use std::{path::PathBuf, process::ExitCode};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use kerrcat::{
    commands,
    config::{Detuning, ResolvedRun, RunConfig},
    parallel,
};
use kerrcat_core::{observables::Observable, phase_space::PhaseSpaceKind, DEFAULT_N_MAX};

/// Atom-cavity dynamics with a Kerr medium: time series, phase-space grids,
/// reference tables and self-checks.
#[derive(Debug, Parser)]
#[command(name = "kerrcat", version)]
struct Cli {
    /// TOML run configuration; built-in defaults are used without it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out` in the configuration).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Override the detuning: a number or `critical`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Override the Kerr strength.
    #[arg(long, global = true)]
    chi: Option<f64>,
    /// Not supported: every computation is deterministic.
    #[arg(long, global = true, hide = true)]
    seed: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Atomic inversion time series.
    Inversion,
    /// Field linear entropy time series.
    Entropy {
        /// Track the atomic linear entropy instead.
        #[arg(long)]
        atom: bool,
    },
    /// Mean photon number time series.
    Photons,
    /// Q function on the configured grid at `time.at`.
    Qfunc,
    /// Wigner function on the configured grid at `time.at`.
    Wigner,
    /// Phase-space frames plus a manifest.
    Animate,
    /// Mean photon number at the collapse time for the ten reference columns.
    Table1 {
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
    },
    /// Fitted cat fidelity and phase for the ten reference columns.
    Table2 {
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        /// Phase scan step in units of pi.
        #[arg(long, default_value_t = commands::DEFAULT_SCAN_RESOLUTION_OVER_PI)]
        scan_resolution: f64,
    },
    /// Critical detuning and the Rabi-frequency Taylor report.
    DeltaC,
    /// Oracle, unitarity, normalization and analytic self-checks.
    Validate {
        /// Truncation for the dense-Hamiltonian comparison.
        #[arg(long, default_value_t = 24)]
        n_max: usize,
    },
    /// Rotating-wave sanity check against the carrier frequencies.
    RwaCheck,
}

fn resolve(cli: &Cli) -> Result<ResolvedRun> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(d) = &cli.delta {
        cfg.model.delta = match d.parse::<f64>() {
            Ok(v) => Detuning::Value(v),
            Err(_) => Detuning::Named(d.clone()),
        };
    }
    if let Some(c) = cli.chi {
        cfg.model.chi = c;
    }
    Ok(cfg.resolve(cli.out.as_deref())?)
}

fn run(cli: Cli) -> Result<bool> {
    if cli.seed.is_some() {
        anyhow::bail!("--seed is not accepted: nothing in kerrcat is random");
    }
    let pool = parallel::pool(cli.jobs).context("building the worker pool")?;
    let out = || cli.out.clone().unwrap_or_else(|| "out".into());
    match cli.command {
        Command::Inversion => commands::series(&resolve(&cli)?, &pool, Observable::Inversion, "inversion").map(|_| true),
        Command::Entropy { atom } => {
            let (q, name) = if atom { (Observable::AtomEntropy, "atom_entropy") } else { (Observable::FieldEntropy, "entropy") };
            commands::series(&resolve(&cli)?, &pool, q, name).map(|_| true)
        }
        Command::Photons => commands::series(&resolve(&cli)?, &pool, Observable::MeanPhoton, "photons").map(|_| true),
        Command::Qfunc => commands::snapshot(&resolve(&cli)?, &pool, PhaseSpaceKind::Q).map(|_| true),
        Command::Wigner => commands::snapshot(&resolve(&cli)?, &pool, PhaseSpaceKind::W).map(|_| true),
        Command::Animate => commands::animate(&resolve(&cli)?, &pool).map(|_| true),
        Command::Table1 { n_max } => commands::table1(&out(), &pool, n_max),
        Command::Table2 { n_max, scan_resolution } => {
            commands::table2(&out(), &pool, n_max, commands::check_scan_resolution(scan_resolution)?)
        }
        Command::DeltaC => commands::delta_c(&resolve(&cli)?).map(|_| true),
        Command::Validate { n_max } => commands::validate(n_max),
        Command::RwaCheck => commands::rwa_check(&resolve(&cli)?).map(|_| true),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
