use rand::seq::SliceRandom;

use super::{standardize, Dataset};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// Train / validation / test proportions.
pub const DEFAULT_FRACTIONS: [f64; 3] = [0.7, 0.2, 0.1];

const MIN_PER_CLASS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitDataset {
    pub train: Dataset,
    pub val: Dataset,
    pub test: Dataset,
    pub split_seed: u64,
    /// Row indices into the source dataset, ascending within each split.
    pub indices: [Vec<usize>; 3],
}

impl SplitDataset {
    pub fn n_features(&self) -> usize {
        self.train.n_features()
    }

    /// Standardize all three parts with the train split's statistics.
    pub fn standardized(self) -> Result<SplitDataset> {
        let (train, mut rest) = standardize(&self.train, &[self.val, self.test])?;
        let test = rest.pop().expect("two datasets passed");
        let val = rest.pop().expect("two datasets passed");
        Ok(SplitDataset {
            train,
            val,
            test,
            ..self
        })
    }
}

/// Largest-remainder apportionment of `total` into `fractions`; ties go to
/// the earlier part.
fn largest_remainder(total: usize, fractions: &[f64; 3]) -> [usize; 3] {
    let quotas = fractions.map(|f| total as f64 * f);
    let mut alloc = quotas.map(|q| q.floor() as usize);
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| {
        (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor()))
    });
    let assigned: usize = alloc.iter().sum();
    for &k in order.iter().take(total - assigned) {
        alloc[k] += 1;
    }
    alloc
}

/// Per-class allocation whose column totals match the overall
/// largest-remainder sizes. Each class gets its floors plus one extra
/// sample in a subset of parts; among combinations that hit the overall
/// totals, the one with the largest summed fractional parts wins (first
/// found on ties). Falls back to independent per-class rounding if no
/// combination matches.
fn allocate(class_counts: [usize; 2], fractions: &[f64; 3]) -> [[usize; 3]; 2] {
    let total = class_counts[0] + class_counts[1];
    let targets = largest_remainder(total, fractions);
    let quotas = class_counts.map(|n| fractions.map(|f| n as f64 * f));
    let floors = quotas.map(|q| q.map(|x| x.floor() as usize));
    let extras = [0, 1].map(|c| class_counts[c] - floors[c].iter().sum::<usize>());

    let mut best: Option<(f64, [[usize; 3]; 2])> = None;
    for m0 in 0u8..8 {
        if m0.count_ones() as usize != extras[0] {
            continue;
        }
        for m1 in 0u8..8 {
            if m1.count_ones() as usize != extras[1] {
                continue;
            }
            let masks = [m0, m1];
            let mut alloc = floors;
            let mut gain = 0.0;
            for c in 0..2 {
                for k in 0..3 {
                    if masks[c] >> k & 1 == 1 {
                        alloc[c][k] += 1;
                        gain += quotas[c][k] - quotas[c][k].floor();
                    }
                }
            }
            let hits = (0..3).all(|k| alloc[0][k] + alloc[1][k] == targets[k]);
            if hits && best.as_ref().is_none_or(|(g, _)| gain > *g) {
                best = Some((gain, alloc));
            }
        }
    }
    let mut alloc = best
        .map(|(_, a)| a)
        .unwrap_or_else(|| class_counts.map(|n| largest_remainder(n, fractions)));

    // every part needs both classes: borrow from the largest part
    for class_alloc in alloc.iter_mut() {
        for k in 0..3 {
            if class_alloc[k] == 0 {
                let donor = (0..3)
                    .max_by_key(|&i| (class_alloc[i], std::cmp::Reverse(i)))
                    .expect("three parts");
                class_alloc[donor] -= 1;
                class_alloc[k] += 1;
            }
        }
    }
    alloc
}

/// Stratified train/val/test split. Each class is shuffled with a stream
/// derived from `seed` and dealt into the three parts in order.
pub fn stratified_split(data: &Dataset, fractions: [f64; 3], seed: u64) -> Result<SplitDataset> {
    if fractions.iter().any(|&f| !(f > 0.0 && f < 1.0))
        || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9
    {
        return Err(Error::config(format!(
            "split fractions {fractions:?} must be positive and sum to 1"
        )));
    }
    let counts = data.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count < MIN_PER_CLASS {
            return Err(Error::TooFewSamples {
                class: class as u8,
                count,
                required: MIN_PER_CLASS,
            });
        }
    }
    let alloc = allocate(counts, &fractions);

    let mut parts: [Vec<usize>; 3] = Default::default();
    for class in 0..2u8 {
        let mut members: Vec<usize> = (0..data.n_samples())
            .filter(|&i| data.labels()[i] == class)
            .collect();
        members.shuffle(&mut stream_rng(seed, Stream::Split, &[class as u64]));
        let mut rest = members.as_slice();
        for (k, part) in parts.iter_mut().enumerate() {
            let (head, tail) = rest.split_at(alloc[class as usize][k]);
            part.extend_from_slice(head);
            rest = tail;
        }
    }
    for part in parts.iter_mut() {
        part.sort_unstable();
    }
    Ok(SplitDataset {
        train: data.select_rows(&parts[0])?,
        val: data.select_rows(&parts[1])?,
        test: data.select_rows(&parts[2])?,
        split_seed: seed,
        indices: parts,
    })
}
