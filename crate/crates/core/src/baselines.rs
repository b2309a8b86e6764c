//! Comparison algorithms: random restart search, greedy forward selection
//! and the all-features model.

use std::time::Instant;

use crate::dataset::SplitDataset;
use crate::error::{Error, Result};
use crate::executor::Executor;
use crate::fitness::{evaluate_chromosome, evaluate_on_test};
use crate::ga::{
    eval_seed, population_tasks, random_population, rank, Chromosome, EvolutionTrace,
    FitnessRecord, GaConfig, TraceRow,
};
use crate::metrics::{Metric, MetricReport};
use crate::models::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineAlgorithm {
    Random,
    ForwardSelection,
    AllFeatures,
}

impl BaselineAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineAlgorithm::Random => "random",
            BaselineAlgorithm::ForwardSelection => "rfs",
            BaselineAlgorithm::AllFeatures => "baseline",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub algorithm: BaselineAlgorithm,
    pub best: FitnessRecord,
    pub wall_seconds: f64,
    pub trace: Option<EvolutionTrace>,
    /// Only the all-features baseline scores the test split itself.
    pub test_metrics: Option<MetricReport>,
}

/// Default cap on greedy forward-selection steps.
pub fn default_max_features(d: usize) -> usize {
    d.min(64)
}

/// Evaluate a fresh random population every round, with no inheritance
/// between rounds, and keep the best record seen. Uses the GA's `L`, `E`,
/// threshold and seed so the budget matches a GA run.
pub fn random_search(
    split: &SplitDataset,
    spec: &ModelSpec,
    config: &GaConfig,
    executor: &Executor,
) -> Result<BaselineResult> {
    config.validate()?;
    spec.validate()?;
    let start = Instant::now();
    let mut trace = EvolutionTrace::default();
    let mut best: Option<FitnessRecord> = None;
    for round in 0..config.max_generations {
        let population = random_population(split.n_features(), config, round)?;
        let tasks = population_tasks(&population.members, config.base_seed);
        let t0 = Instant::now();
        let records = executor
            .evaluate_population(&tasks, split, spec, config.fitness_metric)
            .map_err(|e| e.in_generation(round))?;
        let ranked = rank(records);
        trace.rows.push(TraceRow::from_ranked(
            round,
            &ranked,
            t0.elapsed().as_secs_f64(),
        ));
        if best.as_ref().is_none_or(|b| ranked[0].score > b.score) {
            best = Some(ranked[0].clone());
        }
        if config.score_threshold.is_some_and(|t| ranked[0].score >= t) {
            break;
        }
    }
    Ok(BaselineResult {
        algorithm: BaselineAlgorithm::Random,
        best: best.expect("at least one round"),
        wall_seconds: start.elapsed().as_secs_f64(),
        trace: Some(trace),
        test_metrics: None,
    })
}

/// Greedy forward selection. Each step adds the feature whose inclusion
/// gives the best validation score (lowest index on ties); stops after
/// `max_features` features or when no candidate strictly improves on the
/// current set. One trace row per accepted step.
pub fn forward_selection(
    split: &SplitDataset,
    spec: &ModelSpec,
    max_features: usize,
    metric: Metric,
    base_seed: u64,
    executor: &Executor,
) -> Result<BaselineResult> {
    let d = split.n_features();
    if split.train.n_samples() == 0 || split.val.n_samples() == 0 {
        return Err(Error::EmptyDataset);
    }
    if max_features < 1 || max_features > d {
        return Err(Error::config(format!(
            "max_features must lie in [1, {d}], got {max_features}"
        )));
    }
    spec.validate()?;
    let start = Instant::now();
    let mut current = Chromosome::zeros(d);
    let mut best: Option<FitnessRecord> = None;
    let mut trace = EvolutionTrace::default();

    for step in 0..max_features {
        let candidates: Vec<Chromosome> = (0..d)
            .filter(|&j| !current.get(j))
            .map(|j| {
                let mut c = current.clone();
                c.set(j, true);
                c
            })
            .collect();
        if candidates.is_empty() {
            break;
        }
        let tasks = population_tasks(&candidates, base_seed);
        let t0 = Instant::now();
        let ranked = rank(
            executor
                .evaluate_population(&tasks, split, spec, metric)
                .map_err(|e| e.in_generation(step))?,
        );
        let top = &ranked[0];
        if best.as_ref().is_some_and(|b| top.score <= b.score) {
            break;
        }
        trace.rows.push(TraceRow::from_ranked(
            step,
            &ranked,
            t0.elapsed().as_secs_f64(),
        ));
        current = top.chromosome.clone();
        best = Some(top.clone());
    }
    Ok(BaselineResult {
        algorithm: BaselineAlgorithm::ForwardSelection,
        best: best.expect("d >= 1 guarantees one step"),
        wall_seconds: start.elapsed().as_secs_f64(),
        trace: Some(trace),
        test_metrics: None,
    })
}

/// One model on every feature, scored on validation and test.
pub fn all_features_baseline(
    split: &SplitDataset,
    spec: &ModelSpec,
    metric: Metric,
    base_seed: u64,
) -> Result<BaselineResult> {
    let start = Instant::now();
    let all = Chromosome::all_ones(split.n_features());
    let seed = eval_seed(base_seed, &all);
    let best = evaluate_chromosome(split, spec, &all, seed, metric)?;
    let wall_seconds = start.elapsed().as_secs_f64();
    let test_metrics = evaluate_on_test(split, spec, &all, seed)?;
    Ok(BaselineResult {
        algorithm: BaselineAlgorithm::AllFeatures,
        best,
        wall_seconds,
        trace: None,
        test_metrics: Some(test_metrics),
    })
}
