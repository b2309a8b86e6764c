//! Time the same seeded GA sequentially and on worker pools of increasing
//! size. The benchmark refuses to report if any mode's trace differs.
//!
//! cargo run --release --example parallel_speedup [-- mlp|logistic]

use evoselect::dataset::{stratified_split, DEFAULT_FRACTIONS};
use evoselect::executor::{available_workers, benchmark, ExecutorConfig};
use evoselect::ga::GaConfig;
use evoselect::models::{ModelKind, ModelSpec};
use evoselect::synth;

fn main() -> evoselect::Result<()> {
    let kind: ModelKind = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("mlp")
        .parse()?;
    let data = synth::generate(20, 10, 2000, 2)?;
    let split = stratified_split(&data, DEFAULT_FRACTIONS, 0)?.standardized()?;
    let config = GaConfig {
        population_size: 16,
        ..GaConfig::default()
    };

    let mut modes = vec![ExecutorConfig::sequential()];
    let cores = available_workers();
    modes.extend(
        [2, 4, 8]
            .into_iter()
            .filter(|&w| w <= cores.max(2))
            .map(ExecutorConfig::parallel),
    );

    let table = benchmark(&split, &ModelSpec::default_for(kind), &config, &modes, 3)?;
    println!("{} model, {cores} logical processor(s)", kind.as_str());
    print!("{}", table.to_csv());
    Ok(())
}
