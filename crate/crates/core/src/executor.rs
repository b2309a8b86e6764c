//! Population fitness evaluation, sequential or on a worker pool.
//!
//! Every task carries its own seed and workers hold no random state, so the
//! records returned for a batch do not depend on the mode, the number of
//! workers, or the order in which tasks happen to finish.

use std::any::Any;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use crate::dataset::SplitDataset;
use crate::error::{Error, Result};
use crate::fitness::evaluate_chromosome;
use crate::ga::{evolve, Chromosome, EvolutionTrace, FitnessRecord, GaConfig};
use crate::metrics::Metric;
use crate::models::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecutorConfig {
    pub mode: ExecutionMode,
    pub workers: usize,
}

/// Number of logical processors, falling back to 1.
pub fn available_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

impl ExecutorConfig {
    pub fn sequential() -> Self {
        Self {
            mode: ExecutionMode::Sequential,
            workers: 1,
        }
    }

    pub fn parallel(workers: usize) -> Self {
        Self {
            mode: ExecutionMode::Parallel,
            workers,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers < 1 {
            return Err(Error::config("workers must be >= 1"));
        }
        if self.mode == ExecutionMode::Sequential && self.workers != 1 {
            return Err(Error::config("sequential mode uses exactly one worker"));
        }
        Ok(())
    }

    /// `seq` or `par:<workers>`.
    pub fn label(&self) -> String {
        match self.mode {
            ExecutionMode::Sequential => "seq".into(),
            ExecutionMode::Parallel => format!("par:{}", self.workers),
        }
    }
}

impl std::str::FromStr for ExecutorConfig {
    type Err = Error;

    /// Accepts `seq`, `par` (all logical processors) or `par:<workers>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "seq" => Ok(Self::sequential()),
            None if s == "par" => Ok(Self::parallel(available_workers())),
            Some(("par", n)) => {
                let workers = n
                    .parse()
                    .map_err(|_| Error::config(format!("invalid worker count `{n}`")))?;
                let cfg = Self::parallel(workers);
                cfg.validate()?;
                Ok(cfg)
            }
            _ => Err(Error::config(format!(
                "unknown execution mode `{s}` (expected seq, par or par:N)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalTask {
    pub member_index: usize,
    pub chromosome: Chromosome,
    pub eval_seed: u64,
}

#[derive(Debug, Clone)]
pub struct Executor {
    config: ExecutorConfig,
}

fn panic_message(payload: &(dyn Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

impl Executor {
    pub fn new(config: ExecutorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }

    pub fn sequential() -> Self {
        Self {
            config: ExecutorConfig::sequential(),
        }
    }

    pub fn config(&self) -> ExecutorConfig {
        self.config
    }

    /// Evaluate every task and return records ordered by `member_index`.
    pub fn evaluate_population(
        &self,
        tasks: &[EvalTask],
        split: &SplitDataset,
        spec: &ModelSpec,
        metric: Metric,
    ) -> Result<Vec<FitnessRecord>> {
        self.run_tasks(tasks, |task| {
            evaluate_chromosome(split, spec, &task.chromosome, task.eval_seed, metric)
        })
    }

    /// Apply `eval` to every task. Output order is `member_index` ascending.
    /// The first failure (lowest member index among those observed) aborts
    /// the batch; a panicking task is reported as a worker crash.
    pub fn run_tasks<T, F>(&self, tasks: &[EvalTask], eval: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&EvalTask) -> Result<T> + Sync,
    {
        if tasks.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut order: Vec<usize> = (0..tasks.len()).collect();
        order.sort_by_key(|&i| tasks[i].member_index);
        for w in order.windows(2) {
            if tasks[w[0]].member_index == tasks[w[1]].member_index {
                return Err(Error::config(format!(
                    "duplicate member index {} in batch",
                    tasks[w[0]].member_index
                )));
            }
        }
        if let Some(t) = tasks.iter().find(|t| t.chromosome.is_all_zero()) {
            return Err(Error::Evaluation {
                generation: None,
                member_index: t.member_index,
                source: Box::new(Error::EmptyChromosome),
            });
        }
        let ordered: Vec<&EvalTask> = order.iter().map(|&i| &tasks[i]).collect();

        let run_one = |task: &EvalTask| -> Result<T> {
            match catch_unwind(AssertUnwindSafe(|| eval(task))) {
                Ok(Ok(v)) => Ok(v),
                Ok(Err(e)) => Err(Error::Evaluation {
                    generation: None,
                    member_index: task.member_index,
                    source: Box::new(e),
                }),
                Err(payload) => Err(Error::WorkerPanic {
                    member_index: task.member_index,
                    message: panic_message(payload.as_ref()),
                }),
            }
        };

        let workers = match self.config.mode {
            ExecutionMode::Sequential => 1,
            ExecutionMode::Parallel => self.config.workers.min(ordered.len()),
        };
        if workers == 1 {
            return ordered.into_iter().map(run_one).collect();
        }

        // Idle workers pull the next queued task.
        let next = AtomicUsize::new(0);
        let failed = AtomicBool::new(false);
        let (tx, rx) = mpsc::channel();
        thread::scope(|scope| {
            for _ in 0..workers {
                let tx = tx.clone();
                let (next, failed, ordered, run_one) = (&next, &failed, &ordered, &run_one);
                scope.spawn(move || loop {
                    if failed.load(Ordering::Relaxed) {
                        break;
                    }
                    let slot = next.fetch_add(1, Ordering::Relaxed);
                    let Some(task) = ordered.get(slot) else { break };
                    let result = run_one(task);
                    if result.is_err() {
                        failed.store(true, Ordering::Relaxed);
                    }
                    if tx.send((slot, result)).is_err() {
                        break;
                    }
                });
            }
        });
        drop(tx);

        let mut slots: Vec<Option<T>> = (0..ordered.len()).map(|_| None).collect();
        let mut first_error: Option<(usize, Error)> = None;
        for (slot, result) in rx {
            match result {
                Ok(v) => slots[slot] = Some(v),
                Err(e) => {
                    if first_error.as_ref().is_none_or(|(s, _)| slot < *s) {
                        first_error = Some((slot, e));
                    }
                }
            }
        }
        if let Some((_, e)) = first_error {
            return Err(e);
        }
        Ok(slots
            .into_iter()
            .map(|v| v.expect("every task reported"))
            .collect())
    }
}

/// Free-function form of [`Executor::evaluate_population`].
pub fn evaluate_population(
    tasks: &[EvalTask],
    split: &SplitDataset,
    spec: &ModelSpec,
    metric: Metric,
    config: ExecutorConfig,
) -> Result<Vec<FitnessRecord>> {
    Executor::new(config)?.evaluate_population(tasks, split, spec, metric)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub mode: String,
    pub workers: usize,
    pub generations: usize,
    pub mean_gen_seconds: f64,
    pub min_gen_seconds: f64,
    pub max_gen_seconds: f64,
    pub total_seconds: f64,
    /// Reference (first mode) mean generation time over this mode's.
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingTable {
    pub rows: Vec<TimingRow>,
}

pub const TIMING_HEADER: &str =
    "mode,workers,generations,mean_gen_seconds,min_gen_seconds,max_gen_seconds,total_seconds,speedup";

impl TimingTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TIMING_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.4}\n",
                r.mode,
                r.workers,
                r.generations,
                r.mean_gen_seconds,
                r.min_gen_seconds,
                r.max_gen_seconds,
                r.total_seconds,
                r.speedup
            ));
        }
        out
    }

    /// Speedup of the row with the given label, if present.
    pub fn speedup_of(&self, label: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.mode == label)
            .map(|r| r.speedup)
    }
}

/// Run the same seeded GA under each mode for `generations` generations and
/// compare per-generation wall time. Speedups are relative to the first
/// mode. Any divergence between the modes' traces is a hard error.
pub fn benchmark(
    split: &SplitDataset,
    spec: &ModelSpec,
    ga_config: &GaConfig,
    modes: &[ExecutorConfig],
    generations: usize,
) -> Result<TimingTable> {
    if generations < 1 {
        return Err(Error::config("benchmark needs at least one generation"));
    }
    if modes.is_empty() {
        return Err(Error::config("benchmark needs at least one mode"));
    }
    let config = GaConfig {
        max_generations: generations,
        score_threshold: None,
        ..ga_config.clone()
    };
    let mut traces: Vec<(ExecutorConfig, EvolutionTrace, f64)> = Vec::new();
    for &mode in modes {
        let executor = Executor::new(mode)?;
        let start = Instant::now();
        let run = evolve(split, spec, &config, &executor)?;
        let total = start.elapsed().as_secs_f64();
        if let Some((ref_mode, ref_trace, _)) = traces.first() {
            if !run.trace.same_trajectory(ref_trace) {
                return Err(Error::TraceDivergence {
                    mode: mode.label(),
                    reference: ref_mode.label(),
                });
            }
        }
        traces.push((mode, run.trace, total));
    }
    let reference = traces[0].1.mean_wall_seconds();
    let rows = traces
        .into_iter()
        .map(|(mode, trace, total)| {
            let secs: Vec<f64> = trace.rows.iter().map(|r| r.wall_seconds).collect();
            let mean = trace.mean_wall_seconds();
            TimingRow {
                mode: mode.label(),
                workers: mode.workers,
                generations: trace.len(),
                mean_gen_seconds: mean,
                min_gen_seconds: secs.iter().copied().fold(f64::INFINITY, f64::min),
                max_gen_seconds: secs.iter().copied().fold(0.0, f64::max),
                total_seconds: total,
                speedup: if mean > 0.0 {
                    reference / mean
                } else {
                    f64::NAN
                },
            }
        })
        .collect();
    Ok(TimingTable { rows })
}
