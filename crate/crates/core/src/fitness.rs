//! Scoring a single chromosome: train on the masked train split, score the
//! masked validation (or, once, test) split.

use std::time::Instant;

use crate::dataset::{subset_by_chromosome, Dataset, SplitDataset};
use crate::error::Result;
use crate::ga::{Chromosome, FitnessRecord};
use crate::metrics::{Metric, MetricReport};
use crate::models::{train, ModelSpec};

fn fit_and_score(
    train_part: &Dataset,
    eval_part: &Dataset,
    spec: &ModelSpec,
    chromosome: &Chromosome,
    seed: u64,
) -> Result<MetricReport> {
    let masked_train = subset_by_chromosome(train_part, chromosome)?;
    let masked_eval = subset_by_chromosome(eval_part, chromosome)?;
    let model = train(spec, &masked_train, seed)?;
    let scores = model.predict_scores(&masked_eval)?;
    MetricReport::from_scores(&scores, masked_eval.labels())
}

/// Validation fitness of `chromosome`, timed.
pub fn evaluate_chromosome(
    split: &SplitDataset,
    spec: &ModelSpec,
    chromosome: &Chromosome,
    seed: u64,
    metric: Metric,
) -> Result<FitnessRecord> {
    let start = Instant::now();
    let metrics = fit_and_score(&split.train, &split.val, spec, chromosome, seed)?;
    Ok(FitnessRecord {
        chromosome: chromosome.clone(),
        score: metrics.get(metric),
        eval_seconds: start.elapsed().as_secs_f64(),
        metrics,
    })
}

/// Held-out test metrics for a final chromosome. Uses the same training
/// seed as its fitness evaluation so the model is the one that was scored.
pub fn evaluate_on_test(
    split: &SplitDataset,
    spec: &ModelSpec,
    chromosome: &Chromosome,
    seed: u64,
) -> Result<MetricReport> {
    fit_and_score(&split.train, &split.test, spec, chromosome, seed)
}
