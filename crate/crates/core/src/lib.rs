//! Feature selection by genetic algorithm, with fitness evaluation that is
//! bit-for-bit reproducible whether it runs on one thread or many.
//!
//! ```no_run
//! use evoselect::dataset::{load_csv, stratified_split, DEFAULT_FRACTIONS};
//! use evoselect::executor::{Executor, ExecutorConfig};
//! use evoselect::ga::{evolve, GaConfig};
//! use evoselect::models::ModelSpec;
//!
//! let data = load_csv("data.csv", "label")?;
//! let split = stratified_split(&data, DEFAULT_FRACTIONS, 7)?.standardized()?;
//! let executor = Executor::new(ExecutorConfig::parallel(4))?;
//! let run = evolve(&split, &ModelSpec::logistic(), &GaConfig::default(), &executor)?;
//! println!("{} features, score {:.3}", run.best.chromosome.count_ones(), run.best.score);
//! # Ok::<(), evoselect::Error>(())
//! ```

pub mod baselines;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod executor;
pub mod fitness;
pub mod ga;
pub mod metrics;
pub mod models;
pub mod reporting;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
