//! The same configuration gives the same evolution whatever executes it:
//! sequential, two workers, eight workers, or a later replay from CSV.
//!
//! cargo run --release --example deterministic_replay

use evoselect::dataset::{stratified_split, DEFAULT_FRACTIONS};
use evoselect::executor::{Executor, ExecutorConfig};
use evoselect::ga::{evolve, EvolutionTrace, GaConfig};
use evoselect::models::ModelSpec;
use evoselect::synth;

fn main() -> evoselect::Result<()> {
    let data = synth::generate(20, 10, 1000, 1)?;
    let split = stratified_split(&data, DEFAULT_FRACTIONS, 42)?.standardized()?;
    let spec = ModelSpec::mlp().with_epochs(20);
    let config = GaConfig {
        population_size: 12,
        max_generations: 5,
        base_seed: 42,
        ..GaConfig::default()
    };

    let reference = evolve(&split, &spec, &config, &Executor::sequential())?;
    print!("{}", reference.trace.to_csv());
    for workers in [2, 8] {
        let run = evolve(
            &split,
            &spec,
            &config,
            &Executor::new(ExecutorConfig::parallel(workers))?,
        )?;
        println!(
            "par:{workers} identical: {}",
            run.trace.same_trajectory(&reference.trace) && run.best.same_result(&reference.best)
        );
    }

    let reloaded = EvolutionTrace::from_csv(&reference.trace.to_csv(), split.n_features())?;
    println!(
        "csv round trip identical: {}",
        reloaded.same_trajectory(&reference.trace)
    );
    println!("best chromosome {}", reference.best.chromosome.to_hex());
    Ok(())
}
