//! The genetic algorithm: chromosomes, operators and the evolution loop.

mod chromosome;
mod evolve;
mod operators;
mod trace;

pub use chromosome::Chromosome;
pub use evolve::{eval_seed, evolve, evolve_with_observer, population_tasks, Evolution};
pub use operators::{
    crossover, init_population, mutate, next_generation, parity_crossover, random_population, rank,
};
pub use trace::{EvolutionTrace, TraceRow};

use crate::error::{Error, Result};
use crate::metrics::{Metric, MetricReport};

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Chromosome>,
    pub generation: usize,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub mutation_rate: f64,
    pub elitism: usize,
    pub max_generations: usize,
    pub fitness_metric: Metric,
    /// Stop once the best score of a generation reaches this value.
    pub score_threshold: Option<f64>,
    pub base_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 150,
            mutation_rate: 0.2,
            elitism: 2,
            max_generations: 150,
            fitness_metric: Metric::F1,
            score_threshold: None,
            base_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config("population size must be >= 2"));
        }
        if self.elitism >= self.population_size {
            return Err(Error::config(format!(
                "elitism ({}) must be smaller than the population size ({})",
                self.elitism, self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::config("mutation rate must lie in [0, 1]"));
        }
        if self.max_generations < 1 {
            return Err(Error::config("max generations must be >= 1"));
        }
        Ok(())
    }
}

/// Outcome of evaluating one chromosome.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessRecord {
    pub chromosome: Chromosome,
    /// The configured fitness metric taken from `metrics`.
    pub score: f64,
    pub eval_seconds: f64,
    pub metrics: MetricReport,
}

impl FitnessRecord {
    /// Equality ignoring wall time.
    pub fn same_result(&self, other: &FitnessRecord) -> bool {
        self.chromosome == other.chromosome
            && self.score.to_bits() == other.score.to_bits()
            && self.metrics == other.metrics
    }
}
