//! The `evoselect` command line: `run`, `benchmark`, `compare`, `gen-synth`.
//!
//! Exit status is 0 on success, 2 for configuration or argument errors and
//! 1 for anything else.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Arg, ArgMatches, Command};

use crate::baselines::{all_features_baseline, forward_selection, random_search};
use crate::config::{
    config_text, layered, read_config_file, Algorithm, CliConfig, KEYS, WORKERS_ENV,
};
use crate::dataset::{load_csv, stratified_split, write_csv, SplitDataset};
use crate::error::{Error, Result};
use crate::executor::{
    available_workers, benchmark, ExecutionMode, Executor, ExecutorConfig, TimingTable,
};
use crate::fitness::evaluate_on_test;
use crate::ga::{eval_seed, evolve, EvolutionTrace, FitnessRecord};
use crate::metrics::MetricReport;
use crate::reporting::{
    jaccard_matrix, metrics_table, read_run_dir, runtime_table, write_run, RunRecord,
};
use crate::synth;

const SETTING_HELP: [(&str, &str); 20] = [
    ("dataset", "CSV file with a header row"),
    ("label-column", "name of the label column [default: label]"),
    ("model", "logistic | mlp [default: logistic]"),
    ("algorithm", "ga | random | rfs | baseline [default: ga]"),
    ("mode", "seq | par [default: seq]"),
    (
        "workers",
        "worker threads for par [default: $EVOSELECT_WORKERS or all cores]",
    ),
    ("population-size", "population size L [default: 150]"),
    ("mutation-rate", "per-gene flip probability [default: 0.2]"),
    ("elitism", "elites kept per generation [default: 2]"),
    ("generations", "maximum generations E [default: 150]"),
    (
        "metric",
        "fitness metric: f1 | accuracy | roc_auc [default: f1]",
    ),
    (
        "threshold",
        "stop once the best score reaches this [default: none]",
    ),
    ("seed", "base seed [default: 0]"),
    ("learning-rate", "model learning rate"),
    ("epochs", "training epochs"),
    ("l2", "L2 penalty"),
    ("hidden-units", "MLP hidden units"),
    ("batch-size", "MLP mini-batch size"),
    (
        "max-features",
        "forward-selection step cap [default: min(d, 64)]",
    ),
    ("out-dir", "output directory [default: runs]"),
];

fn setting_args() -> Vec<Arg> {
    debug_assert!(SETTING_HELP.iter().map(|(k, _)| *k).eq(KEYS));
    SETTING_HELP
        .iter()
        .map(|(k, help)| Arg::new(*k).long(*k).value_name("VALUE").help(*help))
        .chain([Arg::new("config")
            .long("config")
            .value_name("FILE")
            .help("key = value file; flags override it")])
        .collect()
}

pub fn command() -> Command {
    Command::new("evoselect")
        .about("Genetic-algorithm feature selection with deterministic parallel evaluation")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("run")
                .about("Run one selection algorithm and write a run file")
                .args(setting_args())
                .arg(
                    Arg::new("run-id")
                        .long("run-id")
                        .value_name("ID")
                        .help("run file name stem [default: derived from the settings]"),
                ),
        )
        .subcommand(
            Command::new("benchmark")
                .about("Time the GA under several executor modes")
                .args(setting_args())
                .arg(
                    Arg::new("modes")
                        .long("modes")
                        .value_name("LIST")
                        .help("comma-separated seq | par | par:N [default: seq,par:<workers>]"),
                )
                .arg(
                    Arg::new("out")
                        .long("out")
                        .value_name("FILE")
                        .help("timing CSV [default: <out-dir>/benchmark.csv]"),
                ),
        )
        .subcommand(
            Command::new("compare")
                .about("Build comparison tables from a directory of run files")
                .arg(
                    Arg::new("run-dir")
                        .long("run-dir")
                        .value_name("DIR")
                        .required(true),
                )
                .arg(
                    Arg::new("out-dir")
                        .long("out-dir")
                        .value_name("DIR")
                        .help("[default: the run directory]"),
                ),
        )
        .subcommand(
            Command::new("gen-synth")
                .about("Write a synthetic dataset with informative and distractor columns")
                .arg(Arg::new("d").long("d").value_name("N").required(true))
                .arg(
                    Arg::new("informative")
                        .long("informative")
                        .value_name("N")
                        .required(true),
                )
                .arg(Arg::new("n").long("n").value_name("N").required(true))
                .arg(
                    Arg::new("seed")
                        .long("seed")
                        .value_name("N")
                        .default_value("0"),
                )
                .arg(
                    Arg::new("out")
                        .long("out")
                        .value_name("FILE")
                        .required(true),
                ),
        )
}

/// Entry point for the binary: real arguments, environment and stdio.
pub fn main() -> i32 {
    let env = std::env::var(WORKERS_ENV).ok();
    run_with(
        std::env::args_os(),
        env.as_deref(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

/// Parse `args` (program name first) and dispatch; returns the exit status.
pub fn run_with<I, T>(
    args: I,
    env_workers: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match matches.subcommand() {
        Some(("run", m)) => settings(m, env_workers).and_then(|cfg| {
            let run_id = m.get_one::<String>("run-id").map(String::as_str);
            cmd_run(&cfg, run_id, out)
        }),
        Some(("benchmark", m)) => settings(m, env_workers).and_then(|cfg| {
            let modes = m.get_one::<String>("modes").map(String::as_str);
            let path = m.get_one::<String>("out").map(PathBuf::from);
            cmd_benchmark(&cfg, modes, path.as_deref(), out)
        }),
        Some(("compare", m)) => {
            let run_dir = PathBuf::from(m.get_one::<String>("run-dir").expect("required"));
            let out_dir = m
                .get_one::<String>("out-dir")
                .map_or_else(|| run_dir.clone(), PathBuf::from);
            cmd_compare(&run_dir, &out_dir, out)
        }
        Some(("gen-synth", m)) => gen_synth_args(m)
            .and_then(|(d, i, n, seed, path)| cmd_gen_synth(d, i, n, seed, &path, out)),
        _ => unreachable!("subcommand required"),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.to_string().replace('\n', " "));
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 2,
        _ => 1,
    }
}

fn settings(m: &ArgMatches, env_workers: Option<&str>) -> Result<CliConfig> {
    let file = match m.get_one::<String>("config") {
        Some(p) => read_config_file(Path::new(p))?,
        None => BTreeMap::new(),
    };
    let flags: BTreeMap<String, String> = KEYS
        .iter()
        .filter_map(|k| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect();
    CliConfig::from_map(&layered(env_workers, &file, &flags))
}

fn gen_synth_args(m: &ArgMatches) -> Result<(usize, usize, usize, u64, PathBuf)> {
    fn num<T: std::str::FromStr>(m: &ArgMatches, k: &str) -> Result<T> {
        let v = m.get_one::<String>(k).expect("required or defaulted");
        v.parse()
            .map_err(|_| Error::config(format!("invalid value `{v}` for `--{k}`")))
    }
    Ok((
        num(m, "d")?,
        num(m, "informative")?,
        num(m, "n")?,
        num(m, "seed")?,
        PathBuf::from(m.get_one::<String>("out").expect("required")),
    ))
}

fn load_split(cfg: &CliConfig) -> Result<(String, SplitDataset)> {
    let path = cfg
        .dataset
        .as_ref()
        .ok_or_else(|| Error::config("no dataset given (use --dataset)"))?;
    let data = load_csv(path, &cfg.label_column)?;
    let name = data.name().to_string();
    let split = stratified_split(&data, cfg.fractions, cfg.ga.base_seed)?.standardized()?;
    Ok((name, split))
}

/// Result of [`run_pipeline`]: the run file contents plus the trace, if the
/// algorithm produces one.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub best: FitnessRecord,
    pub trace: Option<EvolutionTrace>,
}

/// Load, split, standardize, run the configured algorithm and score the
/// winner on the test split. Writes nothing.
pub fn run_pipeline(cfg: &CliConfig, run_id: Option<&str>) -> Result<RunOutcome> {
    let start = Instant::now();
    let (dataset_name, split) = load_split(cfg)?;
    let executor = Executor::new(cfg.executor)?;
    let spec = &cfg.model;
    let seed = cfg.ga.base_seed;
    let metric = cfg.ga.fitness_metric;

    let (best, trace, test_metrics, mean_gen_seconds): (_, _, Option<MetricReport>, f64) =
        match cfg.algorithm {
            Algorithm::Ga => {
                let evo = evolve(&split, spec, &cfg.ga, &executor)?;
                let mean = evo.trace.mean_wall_seconds();
                (evo.best, Some(evo.trace), None, mean)
            }
            Algorithm::Random => {
                let r = random_search(&split, spec, &cfg.ga, &executor)?;
                let trace = r.trace.expect("random search keeps a trace");
                let mean = trace.mean_wall_seconds();
                (r.best, Some(trace), None, mean)
            }
            Algorithm::Rfs => {
                let k = cfg
                    .max_features_for(split.n_features())
                    .min(split.n_features());
                let r = forward_selection(&split, spec, k, metric, seed, &executor)?;
                let trace = r.trace.expect("forward selection keeps a trace");
                let mean = trace.mean_wall_seconds();
                (r.best, Some(trace), None, mean)
            }
            Algorithm::Baseline => {
                let r = all_features_baseline(&split, spec, metric, seed)?;
                (r.best, None, r.test_metrics, r.wall_seconds)
            }
        };
    let test_metrics = match test_metrics {
        Some(t) => t,
        None => evaluate_on_test(
            &split,
            spec,
            &best.chromosome,
            eval_seed(seed, &best.chromosome),
        )?,
    };

    let algorithm = cfg.algorithm_label();
    let run_id = run_id.map_or_else(
        || format!("{dataset_name}_{}_{algorithm}_s{seed}", spec.kind.as_str()),
        str::to_string,
    );
    let record = RunRecord {
        trace_path: trace.as_ref().map(|_| format!("{run_id}.trace.csv")),
        run_id,
        dataset_name,
        model_kind: spec.kind.as_str().into(),
        algorithm,
        config: cfg.to_map(),
        best_chromosome: best.chromosome.clone(),
        val_metrics: best.metrics,
        test_metrics,
        mean_gen_seconds,
        total_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutcome {
        record,
        best,
        trace,
    })
}

pub fn cmd_run(cfg: &CliConfig, run_id: Option<&str>, out: &mut dyn Write) -> Result<()> {
    let outcome = run_pipeline(cfg, run_id)?;
    let r = &outcome.record;
    if let (Some(trace), Some(name)) = (&outcome.trace, &r.trace_path) {
        std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
        trace.write_csv(cfg.out_dir.join(name))?;
    }
    let path = write_run(r, &cfg.out_dir)?;
    writeln!(
        out,
        "{}: best {} {:.4} with {}/{} features, test f1 {:.4}, {:.2}s -> {}",
        r.run_id,
        cfg.ga.fitness_metric.as_str(),
        outcome.best.score,
        r.best_chromosome.count_ones(),
        r.best_chromosome.len(),
        r.test_metrics.f1,
        r.total_seconds,
        path.display()
    )
    .map_err(|e| Error::io("<stdout>", e))
}

fn parse_modes(list: &str) -> Result<Vec<ExecutorConfig>> {
    list.split(',').map(|m| m.trim().parse()).collect()
}

pub fn cmd_benchmark(
    cfg: &CliConfig,
    modes: Option<&str>,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let modes = match modes {
        Some(list) => parse_modes(list)?,
        None => {
            let workers = match cfg.executor.mode {
                ExecutionMode::Parallel => cfg.executor.workers,
                ExecutionMode::Sequential => available_workers(),
            };
            vec![
                ExecutorConfig::sequential(),
                ExecutorConfig::parallel(workers),
            ]
        }
    };
    let (_, split) = load_split(cfg)?;
    let table: TimingTable =
        benchmark(&split, &cfg.model, &cfg.ga, &modes, cfg.ga.max_generations)?;
    let path = csv_path.map_or_else(|| cfg.out_dir.join("benchmark.csv"), Path::to_path_buf);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let csv = table.to_csv();
    std::fs::write(&path, &csv).map_err(|e| Error::io(&path, e))?;
    out.write_all(csv.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Write `runtime_table`, `metrics_table` and one `jaccard_<model>_<dataset>`
/// table per group, each as `.csv` and `.md`.
pub fn cmd_compare(run_dir: &Path, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let runs = read_run_dir(run_dir)?;
    if runs.is_empty() {
        return Err(Error::Report(format!(
            "no run files in {}",
            run_dir.display()
        )));
    }
    let records: Vec<RunRecord> = runs.into_iter().map(|(_, r)| r).collect();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut written = Vec::new();
    let runtime = runtime_table(&records)?;
    let metrics = metrics_table(&records)?;
    for (stem, csv, md) in [
        ("runtime_table", runtime.to_csv(), runtime.to_markdown()),
        ("metrics_table", metrics.to_csv(), metrics.to_markdown()),
    ] {
        write_file(&out_dir.join(format!("{stem}.csv")), &csv)?;
        write_file(&out_dir.join(format!("{stem}.md")), &md)?;
        written.push(stem.to_string());
    }

    let algorithms: Vec<String> = records
        .iter()
        .map(|r| r.algorithm.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut groups: BTreeMap<(&str, &str), Vec<&RunRecord>> = BTreeMap::new();
    for r in &records {
        groups
            .entry((r.model_kind.as_str(), r.dataset_name.as_str()))
            .or_default()
            .push(r);
    }
    for ((model, dataset), group) in groups {
        let m = jaccard_matrix(&group, &algorithms)?;
        let stem = format!("jaccard_{model}_{dataset}");
        write_file(&out_dir.join(format!("{stem}.csv")), &m.to_csv())?;
        write_file(&out_dir.join(format!("{stem}.md")), &m.to_markdown())?;
        written.push(stem);
    }
    writeln!(
        out,
        "{} run files -> {} tables in {}",
        records.len(),
        written.len(),
        out_dir.display()
    )
    .map_err(|e| Error::io("<stdout>", e))
}

pub fn cmd_gen_synth(
    d: usize,
    informative: usize,
    n: usize,
    seed: u64,
    path: &Path,
    out: &mut dyn Write,
) -> Result<()> {
    let data = synth::generate(d, informative, n, seed)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    write_csv(&data, path, "label")?;
    writeln!(out, "wrote {n} x {d} to {}", path.display()).map_err(|e| Error::io("<stdout>", e))
}

/// Config-file text that replays `record`.
pub fn replay_config(record: &RunRecord) -> String {
    config_text(&record.config)
}
