use std::time::Instant;

use super::{
    init_population, next_generation, rank, Chromosome, EvolutionTrace, FitnessRecord, GaConfig,
    Population, TraceRow,
};
use crate::dataset::SplitDataset;
use crate::error::Result;
use crate::executor::{EvalTask, Executor};
use crate::models::ModelSpec;
use crate::rng::{derive_seed, Stream};

/// Training seed for a chromosome's fitness evaluation.
///
/// Keyed by the gene content rather than by position in the population, so
/// a chromosome scores the same wherever and whenever it is evaluated; an
/// elite carried into the next generation keeps its score.
pub fn eval_seed(base_seed: u64, chromosome: &Chromosome) -> u64 {
    let mut coords = Vec::with_capacity(chromosome.len() / 64 + 2);
    coords.push(chromosome.len() as u64);
    for block in chromosome.genes().chunks(64) {
        coords.push(block.iter().fold(0u64, |acc, &g| (acc << 1) | g as u64));
    }
    derive_seed(base_seed, Stream::Evaluation, &coords)
}

/// One evaluation task per member, seeded by [`eval_seed`].
pub fn population_tasks(members: &[Chromosome], base_seed: u64) -> Vec<EvalTask> {
    members
        .iter()
        .enumerate()
        .map(|(i, c)| EvalTask {
            member_index: i,
            chromosome: c.clone(),
            eval_seed: eval_seed(base_seed, c),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Evolution {
    /// Highest-scoring record seen in any generation (earliest on ties).
    pub best: FitnessRecord,
    pub trace: EvolutionTrace,
}

pub fn evolve(
    split: &SplitDataset,
    spec: &ModelSpec,
    config: &GaConfig,
    executor: &Executor,
) -> Result<Evolution> {
    evolve_with_observer(split, spec, config, executor, |_, _| {})
}

/// [`evolve`], calling `observer(population, ranked_records)` after each
/// generation is evaluated.
pub fn evolve_with_observer<F>(
    split: &SplitDataset,
    spec: &ModelSpec,
    config: &GaConfig,
    executor: &Executor,
    mut observer: F,
) -> Result<Evolution>
where
    F: FnMut(&Population, &[FitnessRecord]),
{
    config.validate()?;
    spec.validate()?;
    let mut population = init_population(split.n_features(), config)?;
    let mut trace = EvolutionTrace::default();
    let mut best: Option<FitnessRecord> = None;

    for generation in 0..config.max_generations {
        let tasks = population_tasks(&population.members, config.base_seed);
        let start = Instant::now();
        let records = executor
            .evaluate_population(&tasks, split, spec, config.fitness_metric)
            .map_err(|e| e.in_generation(generation))?;
        let wall = start.elapsed().as_secs_f64();

        let ranked = rank(records);
        trace
            .rows
            .push(TraceRow::from_ranked(generation, &ranked, wall));
        observer(&population, &ranked);

        if best.as_ref().is_none_or(|b| ranked[0].score > b.score) {
            best = Some(ranked[0].clone());
        }
        let reached = config.score_threshold.is_some_and(|t| ranked[0].score >= t);
        if reached || generation + 1 == config.max_generations {
            break;
        }
        population = next_generation(&ranked, config, generation)?;
    }

    Ok(Evolution {
        best: best.expect("at least one generation"),
        trace,
    })
}
