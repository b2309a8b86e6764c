#![allow(dead_code)]

use evoselect::dataset::{stratified_split, Dataset, Matrix, SplitDataset, DEFAULT_FRACTIONS};
use evoselect::models::ModelSpec;
use evoselect::synth;

/// Standardized 70/20/10 split of a synthetic problem.
pub fn synth_split(d: usize, informative: usize, n: usize, seed: u64) -> SplitDataset {
    let data = synth::generate(d, informative, n, seed).unwrap();
    stratified_split(&data, DEFAULT_FRACTIONS, seed)
        .unwrap()
        .standardized()
        .unwrap()
}

pub fn split_of(data: &Dataset, seed: u64) -> SplitDataset {
    stratified_split(data, DEFAULT_FRACTIONS, seed)
        .unwrap()
        .standardized()
        .unwrap()
}

pub fn dataset(name: &str, rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Dataset {
    let d = rows[0].len();
    let names = (0..d).map(|j| format!("x{j}")).collect();
    Dataset::new(name, Matrix::from_rows(&rows), labels, names).unwrap()
}

/// Logistic regression cut down for fast tests.
pub fn quick_logistic() -> ModelSpec {
    ModelSpec::logistic().with_epochs(60)
}
