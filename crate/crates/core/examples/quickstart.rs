//! Evolve a feature subset on a synthetic problem where half the columns
//! are noise.
//!
//! cargo run --release --example quickstart

use evoselect::dataset::{stratified_split, DEFAULT_FRACTIONS};
use evoselect::executor::{available_workers, Executor, ExecutorConfig};
use evoselect::ga::{evolve, GaConfig};
use evoselect::models::ModelSpec;
use evoselect::synth;

fn main() -> evoselect::Result<()> {
    let data = synth::generate(20, 10, 2000, 3)?;
    let split = stratified_split(&data, DEFAULT_FRACTIONS, 0)?.standardized()?;

    let config = GaConfig {
        population_size: 30,
        max_generations: 15,
        ..GaConfig::default()
    };
    let executor = Executor::new(ExecutorConfig::parallel(available_workers()))?;
    let run = evolve(&split, &ModelSpec::logistic(), &config, &executor)?;

    for row in &run.trace.rows {
        println!(
            "gen {:>2}  best {:.4}  mean {:.4}  worst {:.4}",
            row.generation, row.best_score, row.mean_score, row.worst_score
        );
    }
    let names = split.train.feature_names();
    let picked: Vec<&str> = run
        .best
        .chromosome
        .expressed()
        .into_iter()
        .map(|j| names[j].as_str())
        .collect();
    println!("best F1 {:.4} with {:?}", run.best.score, picked);
    Ok(())
}
