//! `fracks`: run configured studies, list presets, check invariants.
//!
//! Exit status: 0 on success, 1 on other errors or failed checks, 2 for a
//! missing file, 3 for a rejected configuration, 4 for a numerical failure.
//! The worker pool size is taken from `RAYON_NUM_THREADS`.

// `!(x > 0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod error;
mod plot;
mod presets;
mod studies;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::load_config;
use error::CliError;

#[derive(Parser)]
#[command(name = "fracks", version, about = "Fractional Keller-Segel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a study from a TOML configuration or a named preset.
    Run {
        /// Configuration file.
        #[arg(required_unless_present = "preset", conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Shipped preset to run instead of a file.
        #[arg(long)]
        preset: Option<String>,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the shipped presets.
    Presets,
    /// Check the library invariants and report each one.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(config: Option<PathBuf>, preset: Option<String>, seed: Option<u64>, out: Option<PathBuf>) -> Result<(), CliError> {
    let (mut cfg, default_out) = match (&config, &preset) {
        (Some(path), _) => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
            (load_config(path)?, PathBuf::from("fracks-out").join(stem))
        }
        (None, Some(name)) => (presets::find(name)?.load()?, PathBuf::from("fracks-out").join(name)),
        (None, None) => unreachable!("clap requires a config or a preset"),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if out.is_some() {
        cfg.out = out;
    }
    let cfg = cfg.resolve(&default_out)?;
    let summary = studies::run_experiment(&cfg)?;
    println!("{} finished, output in {}", cfg.study, summary.dir.display());
    for (k, v) in &summary.notes {
        println!("  {k}: {v}");
    }
    println!("files: {}", summary.files.join(", "));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, preset, seed, out } => match run(config, preset, seed, out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Presets => {
            print!("{}", presets::listing());
            ExitCode::SUCCESS
        }
        Command::Verify { seed } => {
            let checks = verify::run_all(seed);
            for c in &checks {
                println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            println!("{} of {} properties hold", checks.len() - failed, checks.len());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
