//! JSON-lines event log. Line 1 is a header carrying the schema version;
//! every later line is one event, in step order. Nothing time-of-day
//! dependent is written, so equal runs give byte-equal logs.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::ops::ControlFlow;

use anyhow::{bail, Context, Result};
use replicon_core::harness::{census, ReplicationRecord, RunObserver, RunReport, StepEvents};
use replicon_core::{BondKind, CodonId, World};
use serde::{Deserialize, Serialize};

use crate::config::ConfigFile;

pub const SCHEMA: &str = "replicon-metrics";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum MetricsLine {
    Header {
        schema: String,
        version: u32,
        scenario: String,
        rng_seed: u64,
        start_step: u64,
        codons: usize,
        config: Box<ConfigFile>,
    },
    Bond {
        step: u64,
        kind: BondKind,
        a: CodonId,
        b: CodonId,
    },
    Split {
        step: u64,
        codon: CodonId,
        released: Option<CodonId>,
    },
    Spontaneous {
        step: u64,
        a: CodonId,
        b: CodonId,
    },
    Replication {
        step: u64,
        parent_bits: String,
        daughter_bits: String,
        parent_ids: Vec<CodonId>,
        daughter_ids: Vec<CodonId>,
    },
    Checkpoint {
        step: u64,
        normalized_time: f64,
        hash: String,
        census: BTreeMap<String, usize>,
    },
    End {
        step: u64,
        steps_executed: u64,
        normalized_time: f64,
        replications: usize,
        spontaneous_bonds: usize,
        aborted: Option<String>,
    },
}

impl MetricsLine {
    pub fn step(&self) -> Option<u64> {
        match self {
            MetricsLine::Header { start_step, .. } => Some(*start_step),
            MetricsLine::Bond { step, .. }
            | MetricsLine::Split { step, .. }
            | MetricsLine::Spontaneous { step, .. }
            | MetricsLine::Replication { step, .. }
            | MetricsLine::Checkpoint { step, .. }
            | MetricsLine::End { step, .. } => Some(*step),
        }
    }
}

/// Observer that streams events into a writer and keeps the first I/O
/// error, stopping the run when one happens.
pub struct MetricsLog<W: Write> {
    out: W,
    config: ConfigFile,
    hash_every: u64,
    error: Option<io::Error>,
}

impl<W: Write> MetricsLog<W> {
    pub fn new(out: W, config: ConfigFile) -> Self {
        let hash_every = config.hash_every;
        Self {
            out,
            config,
            hash_every,
            error: None,
        }
    }

    fn write(&mut self, line: &MetricsLine) {
        if self.error.is_some() {
            return;
        }
        let res = serde_json::to_writer(&mut self.out, line)
            .map_err(io::Error::from)
            .and_then(|()| self.out.write_all(b"\n"));
        if let Err(e) = res {
            self.error = Some(e);
        }
    }

    fn checkpoint(&mut self, world: &World) {
        match census(world) {
            Ok(census) => self.write(&MetricsLine::Checkpoint {
                step: world.step,
                normalized_time: world.normalized_time(),
                hash: world.state_hash(),
                census,
            }),
            Err(e) => self.error = Some(io::Error::other(e)),
        }
    }

    /// Flushes and hands back the writer, or the first error seen.
    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> RunObserver for MetricsLog<W> {
    fn on_start(&mut self, world: &World) {
        let header = MetricsLine::Header {
            schema: SCHEMA.into(),
            version: SCHEMA_VERSION,
            scenario: self.config.name.clone(),
            rng_seed: self.config.rng_seed,
            start_step: world.step,
            codons: world.len(),
            config: Box::new(self.config.clone()),
        };
        self.write(&header);
        self.checkpoint(world);
    }

    fn on_step(
        &mut self,
        world: &World,
        events: &StepEvents,
        found: &[ReplicationRecord],
    ) -> ControlFlow<()> {
        for e in &events.bonds {
            self.write(&MetricsLine::Bond {
                step: e.step,
                kind: e.kind,
                a: e.a,
                b: e.b,
            });
        }
        for s in &events.splits {
            self.write(&MetricsLine::Split {
                step: s.step,
                codon: s.codon,
                released: s.released,
            });
        }
        for s in &events.spontaneous {
            self.write(&MetricsLine::Spontaneous {
                step: s.step,
                a: s.a,
                b: s.b,
            });
        }
        for r in found {
            self.write(&MetricsLine::Replication {
                step: r.step,
                parent_bits: r.parent_bits.clone(),
                daughter_bits: r.daughter_bits.clone(),
                parent_ids: r.parent_ids.clone(),
                daughter_ids: r.daughter_ids.clone(),
            });
        }
        if self.hash_every > 0 && world.step.is_multiple_of(self.hash_every) {
            self.checkpoint(world);
        }
        if self.error.is_some() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }

    fn on_finish(&mut self, world: &World, report: &RunReport) {
        if self.hash_every == 0 || !world.step.is_multiple_of(self.hash_every) {
            self.checkpoint(world);
        }
        self.write(&MetricsLine::End {
            step: world.step,
            steps_executed: report.steps_executed,
            normalized_time: report.normalized_time,
            replications: report.replication_events.len(),
            spontaneous_bonds: report.spontaneous_bonds.len(),
            aborted: report.aborted.clone(),
        });
    }
}

/// Parses a whole log, checking the header and step order.
pub fn read_metrics(input: impl BufRead) -> Result<Vec<MetricsLine>> {
    let mut lines = Vec::new();
    let mut last_step = 0;
    for (i, line) in input.lines().enumerate() {
        let n = i + 1;
        let line = line.with_context(|| format!("line {n}: read failed"))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: MetricsLine =
            serde_json::from_str(&line).with_context(|| format!("line {n}: malformed event"))?;
        match (&parsed, lines.is_empty()) {
            (MetricsLine::Header { schema, version, .. }, true) => {
                if schema != SCHEMA || *version != SCHEMA_VERSION {
                    bail!("line {n}: unsupported schema {schema} v{version}");
                }
            }
            (MetricsLine::Header { .. }, false) => bail!("line {n}: header after events"),
            (_, true) => bail!("line {n}: missing header"),
            _ => {}
        }
        let step = parsed.step().unwrap_or(last_step);
        if step < last_step {
            bail!("line {n}: step {step} goes back from {last_step}");
        }
        last_step = step;
        lines.push(parsed);
    }
    Ok(lines)
}
