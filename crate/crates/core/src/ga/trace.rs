use std::io::Write;
use std::path::Path;

use super::{Chromosome, FitnessRecord};
use crate::error::{Error, Result};

pub const TRACE_HEADER: &str = "generation,best,worst,mean,wall_seconds,best_chromosome_hex";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    pub best_score: f64,
    pub worst_score: f64,
    pub mean_score: f64,
    pub wall_seconds: f64,
    pub best_chromosome: Chromosome,
}

impl TraceRow {
    /// Summarize a generation's records, which must be ranked best first.
    pub fn from_ranked(generation: usize, ranked: &[FitnessRecord], wall_seconds: f64) -> Self {
        let best = &ranked[0];
        let worst = ranked.iter().map(|r| r.score).fold(f64::INFINITY, f64::min);
        let mean = ranked.iter().map(|r| r.score).sum::<f64>() / ranked.len() as f64;
        Self {
            generation,
            best_score: best.score,
            worst_score: worst,
            // the summed mean can land an ulp outside [worst, best]
            mean_score: mean.clamp(worst, best.score),
            wall_seconds,
            best_chromosome: best.chromosome.clone(),
        }
    }
}

/// Per-generation best / worst / mean fitness and timing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvolutionTrace {
    pub rows: Vec<TraceRow>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Equality of everything except wall time.
    pub fn same_trajectory(&self, other: &EvolutionTrace) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.generation == b.generation
                    && a.best_score.to_bits() == b.best_score.to_bits()
                    && a.worst_score.to_bits() == b.worst_score.to_bits()
                    && a.mean_score.to_bits() == b.mean_score.to_bits()
                    && a.best_chromosome == b.best_chromosome
            })
    }

    pub fn mean_wall_seconds(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.wall_seconds).sum::<f64>() / self.rows.len() as f64
    }

    /// Running maximum of best scores.
    pub fn running_best(&self) -> Vec<f64> {
        self.rows
            .iter()
            .scan(f64::NEG_INFINITY, |acc, r| {
                *acc = acc.max(r.best_score);
                Some(*acc)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.generation,
                r.best_score,
                r.worst_score,
                r.mean_score,
                r.wall_seconds,
                r.best_chromosome.to_hex()
            ));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_csv().as_bytes())
            .map_err(|e| Error::io(path, e))
    }

    /// Parse [`EvolutionTrace::to_csv`] output; `len` is the chromosome length.
    pub fn from_csv(text: &str, len: usize) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(TRACE_HEADER) {
            return Err(Error::Report("trace CSV header mismatch".into()));
        }
        let bad = |line: &str| Error::Report(format!("malformed trace row `{line}`"));
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(bad(line));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line));
            rows.push(TraceRow {
                generation: f[0].parse().map_err(|_| bad(line))?,
                best_score: num(f[1])?,
                worst_score: num(f[2])?,
                mean_score: num(f[3])?,
                wall_seconds: num(f[4])?,
                best_chromosome: Chromosome::from_hex(f[5], len)?,
            });
        }
        Ok(Self { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(g: usize, best: f64, secs: f64) -> TraceRow {
        TraceRow {
            generation: g,
            best_score: best,
            worst_score: 0.1,
            mean_score: 0.3,
            wall_seconds: secs,
            best_chromosome: Chromosome::from_bits(&[1, 0, 1, 1, 0]),
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = EvolutionTrace {
            rows: vec![row(0, 0.5, 0.25), row(1, 0.8123456789, 1e-3)],
        };
        let csv = t.to_csv();
        assert!(csv.starts_with("generation,best,worst,mean,wall_seconds,best_chromosome_hex\n"));
        assert!(csv.contains(",16\n"));
        assert_eq!(EvolutionTrace::from_csv(&csv, 5).unwrap(), t);
        assert!(EvolutionTrace::from_csv("nope\n", 5).is_err());
    }

    #[test]
    fn trajectory_ignores_time() {
        let a = EvolutionTrace {
            rows: vec![row(0, 0.5, 1.0)],
        };
        let b = EvolutionTrace {
            rows: vec![row(0, 0.5, 2.0)],
        };
        let c = EvolutionTrace {
            rows: vec![row(0, 0.6, 1.0)],
        };
        assert!(a.same_trajectory(&b));
        assert!(!a.same_trajectory(&c));
        assert_eq!(b.mean_wall_seconds(), 2.0);
    }

    #[test]
    fn running_best_is_monotone() {
        let t = EvolutionTrace {
            rows: vec![row(0, 0.5, 0.0), row(1, 0.4, 0.0), row(2, 0.7, 0.0)],
        };
        assert_eq!(t.running_best(), vec![0.5, 0.5, 0.7]);
    }
}
