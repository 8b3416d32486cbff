//! The work behind each subcommand, callable without a process boundary.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use replicon_core::harness::{
    calibrate, candidate_grid, run_many, CalibrationPlan, CalibrationScore, RunObserver, RunReport, Runner,
};

use crate::analyze::{summarize, Summary};
use crate::config::ConfigFile;
use crate::metrics::{read_metrics, MetricsLog};
use crate::snapshot::Snapshot;
use crate::svg;

pub const THREADS_ENV: &str = "REPLICON_THREADS";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: ConfigFile,
    pub out: PathBuf,
    pub resume: Option<PathBuf>,
}

/// Runs one scenario and writes `metrics.jsonl`, `report.json`,
/// `final.json`, plus snapshots and frames at their configured intervals.
pub fn run_command(opts: &RunOptions) -> Result<RunReport> {
    let cfg = &opts.config;
    let scenario = cfg.scenario()?;
    fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    let mut runner = match &opts.resume {
        Some(path) => Snapshot::load(path)?.into_runner(),
        None => Runner::new(scenario.build_world()?),
    };
    let start_step = runner.world().step;
    if start_step > scenario.max_steps {
        bail!(
            "snapshot is at step {start_step}, past max_steps {}",
            scenario.max_steps
        );
    }
    let snap_dir = opts.out.join("snapshots");
    let frame_dir = opts.out.join("frames");
    if scenario.snapshot_every > 0 {
        fs::create_dir_all(&snap_dir)?;
    }
    if scenario.frame_every > 0 {
        fs::create_dir_all(&frame_dir)?;
        write_frame(&frame_dir, &runner)?;
    }

    let metrics_path = opts.out.join("metrics.jsonl");
    let file = File::create(&metrics_path).with_context(|| format!("creating {}", metrics_path.display()))?;
    let mut log = MetricsLog::new(BufWriter::new(file), cfg.clone());
    let started = Instant::now();
    log.on_start(runner.world());
    while runner.world().step < scenario.max_steps {
        let Some((events, found)) = runner.step()? else {
            break;
        };
        let step = runner.world().step;
        let flow = log.on_step(runner.world(), &events, &found);
        if scenario.snapshot_every > 0 && step % scenario.snapshot_every == 0 {
            Snapshot::capture(&runner).save(&snap_dir.join(format!("snapshot_{step:09}.json")))?;
        }
        if scenario.frame_every > 0 && step % scenario.frame_every == 0 {
            write_frame(&frame_dir, &runner)?;
        }
        if flow.is_break() {
            break;
        }
        if scenario.stop_after_replications > 0
            && runner.replications.len() >= scenario.stop_after_replications as usize
        {
            break;
        }
    }
    let report = runner.report(
        &scenario.name,
        cfg.rng_seed,
        start_step,
        started.elapsed().as_secs_f64(),
    )?;
    log.on_finish(runner.world(), &report);
    log.finish()
        .with_context(|| format!("writing {}", metrics_path.display()))?;
    Snapshot::capture(&runner).save(&opts.out.join("final.json"))?;
    write_json(&opts.out.join("report.json"), &report)?;
    Ok(report)
}

fn write_frame(dir: &Path, runner: &Runner) -> Result<()> {
    let path = dir.join(format!("frame_{:09}.svg", runner.world().step));
    fs::write(&path, svg::render(runner.world())).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn analyze_command(path: &Path) -> Result<Summary> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let lines = read_metrics(BufReader::new(file)).with_context(|| format!("in {}", path.display()))?;
    Ok(summarize(&lines))
}

/// Worker count from the environment; `None` means use every core.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!("{THREADS_ENV} must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(None),
    }
}

/// The same configuration under several RNG seeds, run in parallel.
/// Writes `seed_<n>.json` reports into `out`.
pub fn sweep_command(cfg: &ConfigFile, seeds: &[u64], out: &Path) -> Result<Vec<RunReport>> {
    let base = cfg.scenario()?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let scenarios: Vec<_> = seeds
        .iter()
        .map(|&rng_seed| replicon_core::Scenario {
            rng_seed,
            ..base.clone()
        })
        .collect();
    let mut reports = Vec::new();
    for (seed, r) in seeds.iter().zip(run_many(&scenarios, threads_from_env()?)) {
        let r = r.with_context(|| format!("seed {seed}"))?;
        write_json(&out.join(format!("seed_{seed}.json")), &r)?;
        reports.push(r);
    }
    Ok(reports)
}

/// Parses `key=v1,v2,...`.
pub fn parse_axis(axis: &str) -> Result<(String, Vec<f64>)> {
    let Some((key, values)) = axis.split_once('=') else {
        bail!("axis {axis:?} must look like key=v1,v2");
    };
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("axis {key}: bad value {v:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        bail!("axis {key} has no values");
    }
    Ok((key.trim().to_string(), values))
}

/// Scores a grid around the config's constants; writes the ranking and the
/// winning profile (as a config) into `out`.
pub fn calibrate_command(
    cfg: &ConfigFile,
    axes: &[(String, Vec<f64>)],
    plan: &CalibrationPlan,
    out: &Path,
) -> Result<Vec<CalibrationScore>> {
    let base = cfg.scenario()?;
    let grid = candidate_grid(&base.params, axes)?;
    let scores = calibrate(&grid, plan, threads_from_env()?)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_json(&out.join("calibration.json"), &scores)?;
    if let Some(best) = scores.first() {
        let profile = ConfigFile::from_scenario(&replicon_core::Scenario {
            params: best.params.clone(),
            ..base
        });
        fs::write(out.join("best.cfg"), profile.to_text()?)?;
    }
    Ok(scores)
}
