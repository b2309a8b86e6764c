//! Binary classifiers used as the inner model of fitness evaluation:
//! a cheap full-batch logistic regression and a heavier one-hidden-layer MLP.

pub mod objective;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Matrix};
use crate::error::{Error, Result};
use objective::{
    logistic_logit, logistic_loss_grad, logistic_param_len, mlp_logit, mlp_loss_grad,
    mlp_param_len, sigmoid, MlpShape,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Logistic,
    Mlp,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Logistic => "logistic",
            ModelKind::Mlp => "mlp",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logistic" => Ok(ModelKind::Logistic),
            "mlp" => Ok(ModelKind::Mlp),
            other => Err(Error::config(format!(
                "unknown model `{other}` (expected logistic or mlp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    /// MLP only.
    pub hidden_units: usize,
    /// MLP only; logistic regression always uses the full batch.
    pub batch_size: usize,
}

impl ModelSpec {
    pub fn logistic() -> Self {
        Self {
            kind: ModelKind::Logistic,
            learning_rate: 0.1,
            epochs: 300,
            l2: 1e-4,
            hidden_units: 32,
            batch_size: 32,
        }
    }

    pub fn mlp() -> Self {
        Self {
            kind: ModelKind::Mlp,
            learning_rate: 0.05,
            epochs: 100,
            l2: 1e-4,
            hidden_units: 32,
            batch_size: 32,
        }
    }

    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Logistic => Self::logistic(),
            ModelKind::Mlp => Self::mlp(),
        }
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_learning_rate(mut self, lr: f64) -> Self {
        self.learning_rate = lr;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning_rate must be > 0"));
        }
        if self.epochs < 1 {
            return Err(Error::config("epochs must be >= 1"));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::config("l2 must be >= 0"));
        }
        if self.kind == ModelKind::Mlp && (self.hidden_units < 1 || self.batch_size < 1) {
            return Err(Error::config("hidden_units and batch_size must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub spec: ModelSpec,
    pub params: Vec<f64>,
    pub train_dim: usize,
}

/// Fitted model plus the loss recorded at the start of every epoch.
#[derive(Debug, Clone)]
pub struct TrainingRun {
    pub model: TrainedModel,
    pub epoch_losses: Vec<f64>,
}

pub fn train(spec: &ModelSpec, data: &Dataset, seed: u64) -> Result<TrainedModel> {
    train_with_history(spec, data, seed).map(|run| run.model)
}

pub fn train_with_history(spec: &ModelSpec, data: &Dataset, seed: u64) -> Result<TrainingRun> {
    spec.validate()?;
    if data.n_samples() == 0 {
        return Err(Error::EmptyDataset);
    }
    let counts = data.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::SingleClass);
    }
    let (params, epoch_losses) = match spec.kind {
        ModelKind::Logistic => fit_logistic(spec, data.features(), data.labels())?,
        ModelKind::Mlp => fit_mlp(spec, data.features(), data.labels(), seed)?,
    };
    Ok(TrainingRun {
        model: TrainedModel {
            spec: spec.clone(),
            params,
            train_dim: data.n_features(),
        },
        epoch_losses,
    })
}

/// Full-batch gradient descent from all-zero weights. Columns that are
/// identically zero receive zero gradient and so keep zero weight.
fn fit_logistic(spec: &ModelSpec, x: &Matrix, y: &[u8]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut params = vec![0.0; logistic_param_len(x.cols())];
    let mut grad = vec![0.0; params.len()];
    let rows: Vec<usize> = (0..x.rows()).collect();
    let mut losses = Vec::with_capacity(spec.epochs);
    for epoch in 0..spec.epochs {
        let loss = logistic_loss_grad(&params, x, y, &rows, spec.l2, &mut grad);
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        losses.push(loss);
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= spec.learning_rate * g;
        }
    }
    Ok((params, losses))
}

/// Mini-batch gradient descent. Weights start uniform in
/// `±1/sqrt(fan_in)`, biases at zero; batches are reshuffled every epoch.
fn fit_mlp(spec: &ModelSpec, x: &Matrix, y: &[u8], seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let shape = MlpShape {
        d: x.cols(),
        hidden: spec.hidden_units,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = vec![0.0; mlp_param_len(shape.d, shape.hidden)];
    let w1_bound = 1.0 / (shape.d.max(1) as f64).sqrt();
    let w2_bound = 1.0 / (shape.hidden as f64).sqrt();
    let w1_len = shape.hidden * shape.d;
    for p in &mut params[..w1_len] {
        *p = rng.random_range(-w1_bound..w1_bound);
    }
    let w2_start = w1_len + shape.hidden;
    for p in &mut params[w2_start..w2_start + shape.hidden] {
        *p = rng.random_range(-w2_bound..w2_bound);
    }

    let mut grad = vec![0.0; params.len()];
    let mut order: Vec<usize> = (0..x.rows()).collect();
    let mut losses = Vec::with_capacity(spec.epochs);
    for epoch in 0..spec.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(spec.batch_size) {
            let loss = mlp_loss_grad(&params, &shape, x, y, batch, spec.l2, &mut grad);
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            epoch_loss += loss * batch.len() as f64;
            for (p, g) in params.iter_mut().zip(&grad) {
                *p -= spec.learning_rate * g;
            }
        }
        losses.push(epoch_loss / x.rows() as f64);
    }
    Ok((params, losses))
}

impl TrainedModel {
    /// Probability of class 1 per row.
    pub fn predict_scores(&self, data: &Dataset) -> Result<Vec<f64>> {
        self.predict_matrix(data.features())
    }

    pub fn predict_matrix(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.train_dim {
            return Err(Error::DimensionMismatch {
                expected: self.train_dim,
                found: x.cols(),
            });
        }
        let scores = match self.spec.kind {
            ModelKind::Logistic => (0..x.rows())
                .map(|i| sigmoid(logistic_logit(&self.params, x.row(i))))
                .collect(),
            ModelKind::Mlp => {
                let shape = MlpShape {
                    d: self.train_dim,
                    hidden: self.spec.hidden_units,
                };
                let mut act = vec![0.0; shape.hidden];
                (0..x.rows())
                    .map(|i| sigmoid(mlp_logit(&self.params, &shape, x.row(i), &mut act)))
                    .collect()
            }
        };
        Ok(scores)
    }
}

pub fn predict_scores(model: &TrainedModel, data: &Dataset) -> Result<Vec<f64>> {
    model.predict_scores(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::subset_by_chromosome;
    use crate::ga::Chromosome;
    use crate::metrics::{accuracy, roc_auc};
    use proptest::prelude::{any, prop_assert, proptest, ProptestConfig};
    use rand_distr::{Distribution, StandardNormal};

    fn dataset(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Dataset {
        let d = rows[0].len();
        Dataset::new(
            "t",
            Matrix::from_rows(&rows),
            labels,
            (0..d).map(|j| format!("f{j}")).collect(),
        )
        .unwrap()
    }

    /// 200 points in 2-D, label = sign(x0 + x1), all at distance >= 1 from
    /// the separating line (margin scaled by |w| = sqrt 2).
    fn separable() -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        while rows.len() < 200 {
            let p: [f64; 2] = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let s = (p[0] + p[1]) / 2f64.sqrt();
            if s.abs() >= 1.0 {
                rows.push(p.to_vec());
                labels.push(u8::from(s > 0.0));
            }
        }
        dataset(rows, labels)
    }

    /// Independent existence check: a perceptron converges on separable data.
    fn perceptron_separates(data: &Dataset) -> bool {
        let mut w = [0.0; 3];
        for _ in 0..1000 {
            let mut errors = 0;
            for i in 0..data.n_samples() {
                let x = data.features().row(i);
                let y = if data.labels()[i] == 1 { 1.0 } else { -1.0 };
                let a = w[0] * x[0] + w[1] * x[1] + w[2];
                if y * a <= 0.0 {
                    w[0] += y * x[0];
                    w[1] += y * x[1];
                    w[2] += y;
                    errors += 1;
                }
            }
            if errors == 0 {
                return true;
            }
        }
        false
    }

    #[test]
    fn logistic_fits_separable_data() {
        let data = separable();
        assert!(perceptron_separates(&data));
        let spec = ModelSpec::logistic()
            .with_epochs(500)
            .with_learning_rate(0.1);
        let model = train(&spec, &data, 0).unwrap();
        let scores = model.predict_scores(&data).unwrap();
        let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s >= 0.5)).collect();
        assert_eq!(accuracy(&preds, data.labels()).unwrap(), 1.0);
        assert_eq!(roc_auc(&scores, data.labels()).unwrap(), 1.0);
    }

    fn random_data(seed: u64, n: usize, d: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        let labels: Vec<u8> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if i < 2 {
                    i as u8
                } else {
                    u8::from(r[0] + 0.5 * rng.random::<f64>() > 0.2)
                }
            })
            .collect();
        dataset(rows, labels)
    }

    #[test]
    fn masked_columns_match_subset() {
        let data = random_data(5, 120, 5);
        let mask = Chromosome::from_bits(&[1, 0, 1, 1, 0]);
        let subset = subset_by_chromosome(&data, &mask).unwrap();
        // zero out the masked columns instead of dropping them
        let mut zeroed = data.features().clone();
        for i in 0..zeroed.rows() {
            for j in [1, 4] {
                zeroed.set(i, j, 0.0);
            }
        }
        let zeroed = Dataset::new(
            "z",
            zeroed,
            data.labels().to_vec(),
            data.feature_names().to_vec(),
        )
        .unwrap();
        let spec = ModelSpec::logistic();
        let a = train(&spec, &subset, 0)
            .unwrap()
            .predict_scores(&subset)
            .unwrap();
        let b = train(&spec, &zeroed, 0)
            .unwrap()
            .predict_scores(&zeroed)
            .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn training_is_deterministic() {
        let data = random_data(6, 80, 4);
        for spec in [ModelSpec::logistic(), ModelSpec::mlp().with_epochs(5)] {
            let a = train(&spec, &data, 9).unwrap();
            let b = train(&spec, &data, 9).unwrap();
            assert_eq!(
                a.params.iter().map(|p| p.to_bits()).collect::<Vec<_>>(),
                b.params.iter().map(|p| p.to_bits()).collect::<Vec<_>>()
            );
        }
        let m = ModelSpec::mlp().with_epochs(2);
        assert_ne!(
            train(&m, &data, 1).unwrap().params,
            train(&m, &data, 2).unwrap().params
        );
    }

    #[test]
    fn zero_weights_score_half() {
        let model = TrainedModel {
            spec: ModelSpec::logistic(),
            params: vec![0.0; 3],
            train_dim: 2,
        };
        let data = random_data(1, 10, 2);
        assert!(model
            .predict_scores(&data)
            .unwrap()
            .iter()
            .all(|&s| s == 0.5));
    }

    #[test]
    fn positive_weight_is_monotone() {
        let model = TrainedModel {
            spec: ModelSpec::logistic(),
            params: vec![0.0, 1.3, 0.0, 0.1],
            train_dim: 3,
        };
        let x = Matrix::from_rows(&[[0.5, -1.0, 2.0], [0.5, 0.0, 2.0], [0.5, 2.5, 2.0]]);
        let s = model.predict_matrix(&x).unwrap();
        assert!(s[0] < s[1] && s[1] < s[2]);
    }

    #[test]
    fn predict_rejects_wrong_width() {
        let data = random_data(2, 20, 3);
        let model = train(&ModelSpec::logistic().with_epochs(1), &data, 0).unwrap();
        let other = random_data(2, 20, 2);
        assert!(matches!(
            model.predict_scores(&other),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn mlp_scores_in_unit_interval() {
        let data = random_data(3, 60, 4);
        let model = train(&ModelSpec::mlp().with_epochs(20), &data, 4).unwrap();
        let s = model.predict_scores(&data).unwrap();
        assert!(s.iter().all(|&p| p > 0.0 && p < 1.0));
        assert_eq!(model.params.len(), mlp_param_len(4, 32));
    }

    #[test]
    fn divergence_names_epoch() {
        let mut data_rows = vec![vec![1e200, -1e200], vec![-1e200, 1e200], vec![1e200, 1e200]];
        data_rows.push(vec![-1e200, -1e200]);
        let data = dataset(data_rows, vec![0, 1, 1, 0]);
        let spec = ModelSpec::logistic().with_learning_rate(1e10);
        assert!(matches!(
            train(&spec, &data, 0),
            Err(Error::NonFiniteLoss { .. })
        ));
    }

    #[test]
    fn invalid_specs() {
        let data = random_data(2, 20, 3);
        assert!(train(&ModelSpec::logistic().with_epochs(0), &data, 0).is_err());
        assert!(train(&ModelSpec::logistic().with_learning_rate(0.0), &data, 0).is_err());
        let mut s = ModelSpec::mlp();
        s.hidden_units = 0;
        assert!(train(&s, &data, 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn logistic_loss_non_increasing(seed in any::<u64>(), lr in 0.001f64..=0.01) {
            let raw = random_data(seed, 50, 4);
            let (data, _) = crate::dataset::standardize(&raw, &[]).unwrap();
            let spec = ModelSpec::logistic().with_epochs(50).with_learning_rate(lr);
            let run = train_with_history(&spec, &data, 0).unwrap();
            for w in run.epoch_losses.windows(2) {
                prop_assert!(w[1] <= w[0]);
            }
        }
    }
}
