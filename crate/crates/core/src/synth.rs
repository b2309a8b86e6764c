//! Synthetic data with a known split between informative and distractor
//! features.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::dataset::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

pub const INFORMATIVE_PREFIX: &str = "inf_";
pub const DISTRACTOR_PREFIX: &str = "dis_";
pub const NOISE_STD: f64 = 0.3;
pub const MIN_SAMPLES: usize = 20;

/// `n` rows of `d` i.i.d. standard-normal features. The first
/// `informative` columns (`inf_*`) drive the label through
/// `1[w . x_inf + noise > 0]` with weights uniform in `[0.5, 1.5]` and
/// noise `N(0, 0.3^2)`; the remaining `dis_*` columns are independent of it.
pub fn generate(d: usize, informative: usize, n: usize, seed: u64) -> Result<Dataset> {
    if d < 1 || informative < 1 || informative > d {
        return Err(Error::config(format!(
            "need 1 <= informative ({informative}) <= d ({d})"
        )));
    }
    if n < MIN_SAMPLES {
        return Err(Error::config(format!("need n >= {MIN_SAMPLES}, got {n}")));
    }
    let mut weight_rng = stream_rng(seed, Stream::Synthetic, &[0]);
    let weights: Vec<f64> = (0..informative)
        .map(|_| weight_rng.random_range(0.5..=1.5))
        .collect();

    let mut rng = stream_rng(seed, Stream::Synthetic, &[1]);
    let noise = Normal::new(0.0, NOISE_STD).expect("valid std");
    let mut data = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let start = data.len();
        data.extend((0..d).map(|_| -> f64 { StandardNormal.sample(&mut rng) }));
        let signal: f64 = data[start..start + informative]
            .iter()
            .zip(&weights)
            .map(|(x, w)| x * w)
            .sum();
        labels.push(u8::from(signal + noise.sample(&mut rng) > 0.0));
    }
    let names = (0..informative)
        .map(|j| format!("{INFORMATIVE_PREFIX}{j}"))
        .chain((0..d - informative).map(|j| format!("{DISTRACTOR_PREFIX}{j}")))
        .collect();
    Dataset::new(
        format!("synth_d{d}_i{informative}_n{n}_s{seed}"),
        Matrix::from_vec(n, d, data),
        labels,
        names,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_names() {
        let ds = generate(20, 10, 2000, 3).unwrap();
        assert_eq!(ds.n_samples(), 2000);
        assert_eq!(ds.n_features(), 20);
        let inf = ds
            .feature_names()
            .iter()
            .filter(|n| n.starts_with("inf_"))
            .count();
        assert_eq!(inf, 10);
        assert_eq!(ds.informative_mask().count_ones(), 10);
        let [neg, pos] = ds.class_counts();
        assert!(neg > 800 && pos > 800);
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            generate(5, 2, 50, 1).unwrap(),
            generate(5, 2, 50, 1).unwrap()
        );
        assert_ne!(
            generate(5, 2, 50, 1).unwrap(),
            generate(5, 2, 50, 2).unwrap()
        );
    }

    #[test]
    fn invalid_sizes() {
        assert!(generate(5, 0, 50, 1).is_err());
        assert!(generate(5, 6, 50, 1).is_err());
        assert!(generate(5, 2, 19, 1).is_err());
    }
}
