//! Run the GA against random search, forward selection and the
//! all-features model, write run files, and build the comparison tables.
//!
//! cargo run --release --example compare_algorithms [-- OUT_DIR]

use std::path::PathBuf;

use evoselect::cli::{cmd_compare, run_pipeline};
use evoselect::config::{Algorithm, CliConfig};
use evoselect::dataset::write_csv;
use evoselect::executor::ExecutorConfig;
use evoselect::reporting::write_run;
use evoselect::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map_or_else(
        || std::env::temp_dir().join("evoselect-compare"),
        PathBuf::from,
    );
    std::fs::create_dir_all(&out)?;
    let csv = out.join("synth.csv");
    write_csv(&synth::generate(16, 6, 1200, 9)?, &csv, "label")?;

    let mut base = CliConfig {
        dataset: Some(csv),
        out_dir: out.join("runs"),
        ..CliConfig::default()
    };
    base.ga.population_size = 20;
    base.ga.max_generations = 10;

    let plans = [
        (Algorithm::Ga, ExecutorConfig::sequential()),
        (Algorithm::Ga, ExecutorConfig::parallel(2)),
        (Algorithm::Random, ExecutorConfig::sequential()),
        (Algorithm::Rfs, ExecutorConfig::sequential()),
        (Algorithm::Baseline, ExecutorConfig::sequential()),
    ];
    for (algorithm, executor) in plans {
        let cfg = CliConfig {
            algorithm,
            executor,
            ..base.clone()
        };
        let outcome = run_pipeline(&cfg, None)?;
        let r = &outcome.record;
        write_run(r, &cfg.out_dir)?;
        println!(
            "{:<9} {:>2} features  val f1 {:.4}  test f1 {:.4}  {:.2}s",
            r.algorithm,
            r.best_chromosome.count_ones(),
            r.val_metrics.f1,
            r.test_metrics.f1,
            r.total_seconds
        );
    }

    let tables = out.join("tables");
    cmd_compare(&base.out_dir, &tables, &mut std::io::stdout())?;
    let jaccard = std::fs::read_to_string(tables.join("jaccard_logistic_synth.md"))?;
    print!("{jaccard}");
    Ok(())
}
