//! Tabular binary-classification data: loading, standardization,
//! stratified splitting and chromosome-driven column projection.

mod load;
mod matrix;
mod split;

pub use load::{load_csv, load_csv_reader, write_csv};
pub use matrix::Matrix;
pub use split::{stratified_split, SplitDataset, DEFAULT_FRACTIONS};

use crate::error::{Error, Result};
use crate::ga::Chromosome;

/// `N x d` feature matrix with labels in `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    name: String,
}

impl Dataset {
    /// Validates the invariants: matching sizes, labels in `{0,1}` with both
    /// classes present, finite features.
    pub fn new(
        name: impl Into<String>,
        features: Matrix,
        labels: Vec<u8>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if features.rows() != labels.len() {
            return Err(Error::LengthMismatch {
                left: features.rows(),
                right: labels.len(),
            });
        }
        if feature_names.len() != features.cols() {
            return Err(Error::DimensionMismatch {
                expected: features.cols(),
                found: feature_names.len(),
            });
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::InvalidDataset("labels must be 0 or 1".into()));
        }
        if !labels.contains(&0) || !labels.contains(&1) {
            return Err(Error::SingleClass);
        }
        if let Some(pos) = features.as_slice().iter().position(|v| !v.is_finite()) {
            let (i, j) = (pos / features.cols(), pos % features.cols());
            return Err(Error::NonFiniteCell {
                row: i as u64 + 1,
                column: feature_names[j].clone(),
            });
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            name: name.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&y| y == 1).count();
        [self.labels.len() - ones, ones]
    }

    /// Rows at `indices`, in that order. Fails if the result loses a class.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Dataset> {
        Dataset::new(
            self.name.clone(),
            self.features.select_rows(indices),
            indices.iter().map(|&i| self.labels[i]).collect(),
            self.feature_names.clone(),
        )
    }

    fn with_features(&self, features: Matrix, feature_names: Vec<String>) -> Dataset {
        Dataset {
            features,
            labels: self.labels.clone(),
            feature_names,
            name: self.name.clone(),
        }
    }

    /// Ground-truth mask from `inf_`-prefixed column names, as written by
    /// the synthetic generator.
    pub fn informative_mask(&self) -> Chromosome {
        Chromosome::new(
            self.feature_names
                .iter()
                .map(|n| n.starts_with(crate::synth::INFORMATIVE_PREFIX))
                .collect(),
        )
    }
}

/// Keep exactly the columns whose gene is expressed, in ascending order.
pub fn subset_by_chromosome(data: &Dataset, chromosome: &Chromosome) -> Result<Dataset> {
    if chromosome.len() != data.n_features() {
        return Err(Error::DimensionMismatch {
            expected: data.n_features(),
            found: chromosome.len(),
        });
    }
    if chromosome.is_all_zero() {
        return Err(Error::EmptyChromosome);
    }
    let cols = chromosome.expressed();
    let names = cols
        .iter()
        .map(|&j| data.feature_names[j].clone())
        .collect();
    Ok(data.with_features(data.features.select_columns(&cols), names))
}

/// Per-column mean and sample standard deviation.
fn column_stats(m: &Matrix) -> Vec<(f64, f64)> {
    let n = m.rows() as f64;
    (0..m.cols())
        .map(|j| {
            let mean = m.column(j).sum::<f64>() / n;
            let var = if m.rows() > 1 {
                m.column(j).map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            (mean, var.sqrt())
        })
        .collect()
}

/// Scale every dataset by the train split's column statistics. Columns with
/// zero train variance become all-zero everywhere so `d` stays fixed.
pub fn standardize(train: &Dataset, others: &[Dataset]) -> Result<(Dataset, Vec<Dataset>)> {
    for other in others {
        if other.n_features() != train.n_features() {
            return Err(Error::DimensionMismatch {
                expected: train.n_features(),
                found: other.n_features(),
            });
        }
        if other.feature_names != train.feature_names {
            return Err(Error::InvalidDataset(
                "feature names differ between datasets".into(),
            ));
        }
    }
    let stats = column_stats(&train.features);
    let apply = |ds: &Dataset| {
        let mut m = ds.features.clone();
        for i in 0..m.rows() {
            for (j, &(mean, sd)) in stats.iter().enumerate() {
                let v = if sd > 0.0 {
                    (m.get(i, j) - mean) / sd
                } else {
                    0.0
                };
                m.set(i, j, v);
            }
        }
        ds.with_features(m, ds.feature_names.clone())
    };
    Ok((apply(train), others.iter().map(apply).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(rows: &[&[f64]], labels: &[u8]) -> Dataset {
        let d = rows[0].len();
        Dataset::new(
            "t",
            Matrix::from_rows(rows),
            labels.to_vec(),
            (0..d).map(|j| format!("f{j}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_single_class_and_non_finite() {
        let m = Matrix::from_rows(&[[1.0], [2.0]]);
        assert!(matches!(
            Dataset::new("x", m.clone(), vec![1, 1], vec!["a".into()]),
            Err(Error::SingleClass)
        ));
        let m = Matrix::from_rows(&[[1.0], [f64::NAN]]);
        assert!(matches!(
            Dataset::new("x", m, vec![0, 1], vec!["a".into()]),
            Err(Error::NonFiniteCell { row: 2, .. })
        ));
    }

    #[test]
    fn subset_selects_expressed_columns() {
        let d = ds(&[&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0, 7.0, 8.0]], &[0, 1]);
        let s = subset_by_chromosome(&d, &Chromosome::from_bits(&[1, 0, 1, 0])).unwrap();
        assert_eq!(s.n_features(), 2);
        assert_eq!(s.feature_names(), &["f0".to_string(), "f2".to_string()]);
        assert_eq!(s.features().row(1), &[5.0, 7.0]);
        assert_eq!(s.labels(), d.labels());

        let all = subset_by_chromosome(&d, &Chromosome::all_ones(4)).unwrap();
        assert_eq!(all, d);
    }

    #[test]
    fn subset_on_iris_style_columns() {
        // sepal length, sepal width, petal length, petal width
        let names = ["sepal_length", "sepal_width", "petal_length", "petal_width"];
        let m = Matrix::from_rows(&[
            [5.1, 3.5, 1.4, 0.2],
            [7.0, 3.2, 4.7, 1.4],
            [6.3, 3.3, 6.0, 2.5],
        ]);
        let d = Dataset::new(
            "iris",
            m,
            vec![0, 1, 1],
            names.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap();
        let s = subset_by_chromosome(&d, &Chromosome::from_bits(&[1, 0, 0, 1])).unwrap();
        assert_eq!(s.n_features(), 2);
        assert_eq!(s.n_samples(), 3);
        assert_eq!(s.feature_names(), &["sepal_length", "petal_width"]);
    }

    #[test]
    fn subset_errors() {
        let d = ds(&[&[1.0, 2.0], &[3.0, 4.0]], &[0, 1]);
        assert!(matches!(
            subset_by_chromosome(&d, &Chromosome::from_bits(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            subset_by_chromosome(&d, &Chromosome::zeros(2)),
            Err(Error::EmptyChromosome)
        ));
    }

    #[test]
    fn subset_does_not_alias() {
        let d = ds(&[&[1.0, 2.0], &[3.0, 4.0]], &[0, 1]);
        let mut s = subset_by_chromosome(&d, &Chromosome::from_bits(&[1, 1])).unwrap();
        s.features.set(0, 0, 99.0);
        assert_eq!(d.features().get(0, 0), 1.0);
    }

    #[test]
    fn standardize_uses_train_statistics() {
        let train = ds(&[&[1.0, 5.0], &[2.0, 5.0], &[3.0, 5.0]], &[0, 1, 0]);
        let val = ds(&[&[2.0, 7.0], &[4.0, 1.0]], &[0, 1]);
        let (t, others) = standardize(&train, std::slice::from_ref(&val)).unwrap();
        let col: Vec<f64> = t.features().column(0).collect();
        assert_eq!(col, vec![-1.0, 0.0, 1.0]);
        assert_eq!(others[0].features().get(0, 0), 0.0);
        assert_eq!(others[0].features().get(1, 0), 2.0);
        // constant train column is zeroed in every split
        assert!(t.features().column(1).all(|v| v == 0.0));
        assert!(others[0].features().column(1).all(|v| v == 0.0));
    }

    #[test]
    fn standardize_dimension_mismatch() {
        let a = ds(&[&[1.0, 2.0], &[3.0, 4.0]], &[0, 1]);
        let b = ds(&[&[1.0], &[3.0]], &[0, 1]);
        assert!(matches!(
            standardize(&a, &[b]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn mean_std(xs: &[f64]) -> (f64, f64) {
        let mut sum = 0.0;
        for x in xs {
            sum += x;
        }
        let mean = sum / xs.len() as f64;
        let mut ss = 0.0;
        for x in xs {
            ss += (x - mean) * (x - mean);
        }
        (mean, (ss / (xs.len() as f64 - 1.0)).sqrt())
    }

    #[test]
    fn standardize_is_idempotent() {
        let train = ds(
            &[&[1.0], &[4.0], &[2.5], &[-3.0], &[10.0]],
            &[0, 1, 0, 1, 1],
        );
        let (once, _) = standardize(&train, &[]).unwrap();
        let (twice, _) = standardize(&once, &[]).unwrap();
        for (a, b) in once
            .features()
            .as_slice()
            .iter()
            .zip(twice.features().as_slice())
        {
            assert!((a - b).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn standardized_train_columns_are_unit(
            rows in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 3), 4..40)
        ) {
            let labels: Vec<u8> = (0..rows.len()).map(|i| (i % 2) as u8).collect();
            let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
            let train = ds(&refs, &labels);
            let (t, _) = standardize(&train, &[]).unwrap();
            for j in 0..3 {
                let raw: Vec<f64> = train.features().column(j).collect();
                let (_, sd) = mean_std(&raw);
                let col: Vec<f64> = t.features().column(j).collect();
                if sd > 1e-6 {
                    let (m, s) = mean_std(&col);
                    prop_assert!(m.abs() < 1e-9);
                    prop_assert!((s - 1.0).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn subset_width_is_popcount(genes in prop::collection::vec(any::<bool>(), 6)) {
            prop_assume!(genes.iter().any(|&g| g));
            let d = ds(&[&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &[6.0, 5.0, 4.0, 3.0, 2.0, 1.0]], &[0, 1]);
            let c = Chromosome::new(genes);
            let s = subset_by_chromosome(&d, &c).unwrap();
            prop_assert_eq!(s.n_features(), c.count_ones());
        }
    }
}
