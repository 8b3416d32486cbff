use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use replicon_cli::commands::{
    analyze_command, calibrate_command, parse_axis, run_command, sweep_command, RunOptions,
};
use replicon_cli::ConfigFile;
use replicon_core::harness::CalibrationPlan;

#[derive(Parser)]
#[command(
    name = "replicon",
    version,
    about = "Self-replicating codon strands in a 2-D liquid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write logs, snapshots and frames.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides rng_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides max_steps (the step number to stop at).
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Continue from a snapshot written by an earlier run.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Summarize a metrics.jsonl log.
    Analyze { metrics: PathBuf },
    /// Run one config under several seeds in parallel.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated RNG seeds.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
    /// Score a grid of constants and write the best profile.
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid axis as key=v1,v2,...; repeat for more axes.
        #[arg(long = "axis")]
        axes: Vec<String>,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 300_000)]
        budget: u64,
        #[arg(long, default_value_t = 5_000)]
        intact_steps: u64,
        #[arg(long, default_value = "calibration")]
        out: PathBuf,
    },
    /// Print the default configuration.
    Defaults,
}

fn load(path: &Option<PathBuf>) -> Result<ConfigFile> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run {
            config,
            seed,
            steps,
            out,
            resume,
        } => {
            let mut config = load(&config)?;
            if let Some(s) = seed {
                config.rng_seed = s;
            }
            if let Some(s) = steps {
                config.max_steps = s;
            }
            let report = run_command(&RunOptions {
                config,
                out: out.clone(),
                resume,
            })?;
            println!(
                "{} steps ({} normalized time), {} replications, {} spontaneous bonds, {:.1}s; output in {}",
                report.steps_executed,
                report.normalized_time,
                report.replication_events.len(),
                report.spontaneous_bonds.len(),
                report.wall_clock_secs,
                out.display()
            );
            if let Some(why) = report.aborted {
                eprintln!("run aborted: {why}");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Analyze { metrics } => {
            let summary = analyze_command(&metrics)?;
            // A closed pipe (`| head`) is not worth an error.
            let _ = write!(std::io::stdout().lock(), "{summary}");
        }
        Command::Sweep {
            config,
            seeds,
            steps,
            out,
        } => {
            let mut config = load(&config)?;
            if let Some(s) = steps {
                config.max_steps = s;
            }
            let reports = sweep_command(&config, &seeds, &out)?;
            println!(
                "{:>6}  {:>10}  {:>12}  {:>11}  {:>8}",
                "seed", "steps", "replications", "spontaneous", "first"
            );
            for r in &reports {
                let first = r
                    .replication_events
                    .first()
                    .map_or("-".to_string(), |e| e.step.to_string());
                println!(
                    "{:>6}  {:>10}  {:>12}  {:>11}  {:>8}",
                    r.rng_seed,
                    r.steps_executed,
                    r.replication_events.len(),
                    r.spontaneous_bonds.len(),
                    first
                );
            }
        }
        Command::Calibrate {
            config,
            axes,
            trials,
            budget,
            intact_steps,
            out,
        } => {
            let config = load(&config)?;
            let axes = axes.iter().map(|a| parse_axis(a)).collect::<Result<Vec<_>>>()?;
            let plan = CalibrationPlan {
                seed_bits: if config.seed_bits.is_empty() {
                    "00011001".into()
                } else {
                    config.seed_bits.clone()
                },
                free_codon_count: config.free_codon_count,
                trials,
                intact_steps,
                budget_steps: budget,
                base_seed: config.rng_seed,
            };
            let scores = calibrate_command(&config, &axes, &plan, &out)?;
            println!(
                "{:>7}  {:>6}  {:>10}  {:>6}  candidate",
                "score", "intact", "replicated", "quiet"
            );
            for s in &scores {
                println!(
                    "{:>7.3}  {:>6.2}  {:>10.2}  {:>6.2}  {}",
                    s.total, s.intact, s.replicated, s.quiet, s.name
                );
            }
            println!("best profile written to {}", out.join("best.cfg").display());
        }
        Command::Defaults => print!("{}", ConfigFile::default().to_text()?),
    }
    Ok(ExitCode::SUCCESS)
}
