//! Crossover, mutation and one generation step, driven by hand.

use evoselect::ga::{
    crossover, init_population, mutate, next_generation, parity_crossover, Chromosome,
    FitnessRecord, GaConfig,
};
use evoselect::metrics::MetricReport;

fn main() -> evoselect::Result<()> {
    let p1 = Chromosome::from_bits(&[1, 0, 1, 0, 1, 0]);
    let p2 = Chromosome::from_bits(&[0, 1, 1, 1, 0, 0]);
    println!("{p1} x {p2} -> {}", parity_crossover(&p1, &p2)?);

    let a = Chromosome::from_bits(&[0, 1]);
    let b = Chromosome::from_bits(&[1, 0]);
    println!(
        "{a} x {b} -> {} (empty child replaced by the fitter parent)",
        crossover(&a, 0.4, &b, 0.9)?
    );

    for seed in 0..3 {
        println!("mutate({p1}, 0.2, {seed}) = {}", mutate(&p1, 0.2, seed)?);
    }

    let config = GaConfig {
        population_size: 6,
        elitism: 2,
        base_seed: 3,
        ..GaConfig::default()
    };
    let population = init_population(8, &config)?;
    // stand-in fitness: fraction of the first four genes expressed
    let mut ranked: Vec<FitnessRecord> = population
        .members
        .iter()
        .map(|c| {
            let score = (0..4).filter(|&j| c.get(j)).count() as f64 / 4.0;
            FitnessRecord {
                chromosome: c.clone(),
                score,
                eval_seconds: 0.0,
                metrics: MetricReport {
                    accuracy: score,
                    f1: score,
                    roc_auc: score,
                },
            }
        })
        .collect();
    ranked.sort_by(|x, y| y.score.total_cmp(&x.score));
    let next = next_generation(&ranked, &config, 0)?;
    for (i, (old, new)) in ranked.iter().zip(&next.members).enumerate() {
        let tag = if i < config.elitism { "elite" } else { "child" };
        println!("{} ({:.2})  ->  {new}  {tag}", old.chromosome, old.score);
    }
    Ok(())
}
