//! Summaries of a metrics log.

use std::collections::BTreeMap;
use std::fmt;

use replicon_core::strands::mirror;

use crate::metrics::MetricsLine;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicationRow {
    pub step: u64,
    pub parent_bits: String,
    pub daughter_bits: String,
}

/// Counts of one pattern and of its negative mirror image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorPair {
    pub pattern: String,
    pub pattern_count: usize,
    pub mirror: String,
    pub mirror_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub scenario: Option<String>,
    /// Multi-codon strand counts at each checkpoint.
    pub census: Vec<(u64, BTreeMap<String, usize>)>,
    pub replications: Vec<ReplicationRow>,
    pub spontaneous_bonds: usize,
    pub mirror_breakdown: Vec<MirrorPair>,
    pub last_step: Option<u64>,
    pub aborted: Option<String>,
}

impl Summary {
    pub fn first_replication(&self) -> Option<u64> {
        self.replications.first().map(|r| r.step)
    }
}

pub fn summarize(lines: &[MetricsLine]) -> Summary {
    let mut s = Summary::default();
    for line in lines {
        match line {
            MetricsLine::Header { scenario, .. } => s.scenario = Some(scenario.clone()),
            MetricsLine::Checkpoint { step, census, .. } => {
                let strands: BTreeMap<String, usize> = census
                    .iter()
                    .filter(|(bits, _)| bits.len() > 1)
                    .map(|(b, n)| (b.clone(), *n))
                    .collect();
                s.census.push((*step, strands));
            }
            MetricsLine::Replication {
                step,
                parent_bits,
                daughter_bits,
                ..
            } => s.replications.push(ReplicationRow {
                step: *step,
                parent_bits: parent_bits.clone(),
                daughter_bits: daughter_bits.clone(),
            }),
            MetricsLine::Spontaneous { .. } => s.spontaneous_bonds += 1,
            MetricsLine::End { aborted, .. } => s.aborted = aborted.clone(),
            MetricsLine::Bond { .. } | MetricsLine::Split { .. } => {}
        }
        if let Some(step) = line.step() {
            s.last_step = Some(step);
        }
    }
    if let Some((_, last)) = s.census.last() {
        s.mirror_breakdown = mirror_breakdown(last);
    }
    s
}

/// Groups strands into {X, r(n(X))} pairs; X is the lexicographically
/// smaller member.
pub fn mirror_breakdown(census: &BTreeMap<String, usize>) -> Vec<MirrorPair> {
    let mut pairs: BTreeMap<String, MirrorPair> = BTreeMap::new();
    for bits in census.keys() {
        let Ok(m) = mirror(bits) else { continue };
        let (x, y) = if *bits <= m {
            (bits.clone(), m)
        } else {
            (m, bits.clone())
        };
        pairs.entry(x.clone()).or_insert_with(|| MirrorPair {
            pattern_count: census.get(&x).copied().unwrap_or(0),
            mirror_count: if x == y {
                0
            } else {
                census.get(&y).copied().unwrap_or(0)
            },
            pattern: x,
            mirror: y,
        });
    }
    pairs.into_values().collect()
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.scenario {
            writeln!(f, "scenario: {name}")?;
        }
        if let Some(step) = self.last_step {
            writeln!(f, "last step: {step}")?;
        }
        if let Some(why) = &self.aborted {
            writeln!(f, "aborted: {why}")?;
        }
        match self.first_replication() {
            Some(step) => writeln!(f, "first replication: step {step}")?,
            None => writeln!(f, "first replication: none")?,
        }
        writeln!(f, "spontaneous red-blue bonds: {}", self.spontaneous_bonds)?;

        if !self.census.is_empty() {
            writeln!(f, "\nstrand census (strands of length >= 2):")?;
            for (step, strands) in &self.census {
                let list: Vec<String> = strands.iter().map(|(b, n)| format!("{b} x{n}")).collect();
                writeln!(
                    f,
                    "  {step:>10}  {}",
                    if list.is_empty() {
                        "-".into()
                    } else {
                        list.join(", ")
                    }
                )?;
            }
        }
        if !self.replications.is_empty() {
            writeln!(f, "\nreplications:")?;
            writeln!(f, "  {:>10}  {:<20}  {:<20}", "step", "parent", "daughter")?;
            for r in &self.replications {
                writeln!(
                    f,
                    "  {:>10}  {:<20}  {:<20}",
                    r.step, r.parent_bits, r.daughter_bits
                )?;
            }
        }
        if !self.mirror_breakdown.is_empty() {
            writeln!(f, "\nmirror breakdown (final census):")?;
            for p in &self.mirror_breakdown {
                if p.pattern == p.mirror {
                    writeln!(f, "  {} x{} (self-mirror)", p.pattern, p.pattern_count)?;
                } else {
                    writeln!(
                        f,
                        "  {} x{}  |  {} x{}",
                        p.pattern, p.pattern_count, p.mirror, p.mirror_count
                    )?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_log_gives_empty_summary() {
        let s = summarize(&[]);
        assert_eq!(s, Summary::default());
        assert!(s.to_string().contains("first replication: none"));
    }

    #[test]
    fn one_replication_one_row() {
        let lines = vec![MetricsLine::Replication {
            step: 42,
            parent_bits: "00011001".into(),
            daughter_bits: "01100111".into(),
            parent_ids: vec![],
            daughter_ids: vec![],
        }];
        let s = summarize(&lines);
        assert_eq!(s.replications.len(), 1);
        assert_eq!(s.first_replication(), Some(42));
    }

    #[test]
    fn breakdown_pairs_mirrors() {
        let census: BTreeMap<String, usize> = [("00011001", 3), ("01100111", 2), ("0", 40), ("01", 1)]
            .into_iter()
            .map(|(b, n)| (b.to_string(), n))
            .collect();
        let pairs = mirror_breakdown(&census);
        let main = pairs.iter().find(|p| p.pattern == "00011001").unwrap();
        assert_eq!(
            (main.pattern_count, main.mirror.as_str(), main.mirror_count),
            (3, "01100111", 2)
        );
        assert!(pairs.iter().any(|p| p.pattern == "01" && p.mirror == "01"));
    }
}
