//! Regularized log-loss objectives and their analytic gradients over flat
//! parameter vectors.
//!
//! Logistic layout: `[w_0 .. w_{d-1}, b]`.
//!
//! MLP layout (hidden width `h`): `[W1 (h x d, row-major), b1 (h), w2 (h), b2]`.
//! Biases are not regularized.

use crate::dataset::Matrix;

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
#[inline]
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Log loss of a single logit against a 0/1 label.
#[inline]
fn log_loss(z: f64, y: f64) -> f64 {
    softplus(z) - y * z
}

pub fn logistic_param_len(d: usize) -> usize {
    d + 1
}

pub fn mlp_param_len(d: usize, hidden: usize) -> usize {
    hidden * d + 2 * hidden + 1
}

pub fn logistic_logit(params: &[f64], x: &[f64]) -> f64 {
    let d = x.len();
    params[..d].iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + params[d]
}

/// Mean log loss over `rows` plus `l2/2 * |w|^2`; gradient written to `grad`.
pub fn logistic_loss_grad(
    params: &[f64],
    x: &Matrix,
    y: &[u8],
    rows: &[usize],
    l2: f64,
    grad: &mut [f64],
) -> f64 {
    let d = x.cols();
    grad.fill(0.0);
    let mut loss = 0.0;
    for &i in rows {
        let xi = x.row(i);
        let z = logistic_logit(params, xi);
        let yi = y[i] as f64;
        loss += log_loss(z, yi);
        let r = sigmoid(z) - yi;
        for (g, v) in grad[..d].iter_mut().zip(xi) {
            *g += r * v;
        }
        grad[d] += r;
    }
    let n = rows.len() as f64;
    loss /= n;
    let mut reg = 0.0;
    for j in 0..d {
        grad[j] = grad[j] / n + l2 * params[j];
        reg += params[j] * params[j];
    }
    grad[d] /= n;
    loss + 0.5 * l2 * reg
}

pub struct MlpShape {
    pub d: usize,
    pub hidden: usize,
}

impl MlpShape {
    fn w1(&self) -> std::ops::Range<usize> {
        0..self.hidden * self.d
    }
    fn b1(&self) -> std::ops::Range<usize> {
        let s = self.hidden * self.d;
        s..s + self.hidden
    }
    fn w2(&self) -> std::ops::Range<usize> {
        let s = self.hidden * self.d + self.hidden;
        s..s + self.hidden
    }
    fn b2(&self) -> usize {
        self.hidden * self.d + 2 * self.hidden
    }
    /// Indices of regularized (weight) parameters.
    pub(crate) fn is_weight(&self, k: usize) -> bool {
        self.w1().contains(&k) || self.w2().contains(&k)
    }
}

/// Logit of one sample; `hidden_act` receives the post-ReLU activations.
pub fn mlp_logit(params: &[f64], shape: &MlpShape, x: &[f64], hidden_act: &mut [f64]) -> f64 {
    let d = shape.d;
    let w1 = &params[shape.w1()];
    let b1 = &params[shape.b1()];
    let w2 = &params[shape.w2()];
    let mut z = params[shape.b2()];
    for k in 0..shape.hidden {
        let row = &w1[k * d..(k + 1) * d];
        let a = row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + b1[k];
        let h = a.max(0.0);
        hidden_act[k] = h;
        z += w2[k] * h;
    }
    z
}

/// Mean log loss of the one-hidden-layer ReLU network over `rows` plus
/// `l2/2 * (|W1|^2 + |w2|^2)`; gradient written to `grad`.
pub fn mlp_loss_grad(
    params: &[f64],
    shape: &MlpShape,
    x: &Matrix,
    y: &[u8],
    rows: &[usize],
    l2: f64,
    grad: &mut [f64],
) -> f64 {
    let d = shape.d;
    let h = shape.hidden;
    grad.fill(0.0);
    let mut act = vec![0.0; h];
    let mut loss = 0.0;
    let (w1r, b1r, w2r, b2i) = (shape.w1(), shape.b1(), shape.w2(), shape.b2());
    for &i in rows {
        let xi = x.row(i);
        let z = mlp_logit(params, shape, xi, &mut act);
        let yi = y[i] as f64;
        loss += log_loss(z, yi);
        let dz = sigmoid(z) - yi;
        grad[b2i] += dz;
        for k in 0..h {
            grad[w2r.start + k] += dz * act[k];
            if act[k] > 0.0 {
                let da = dz * params[w2r.start + k];
                grad[b1r.start + k] += da;
                let g_row = &mut grad[w1r.start + k * d..w1r.start + (k + 1) * d];
                for (g, v) in g_row.iter_mut().zip(xi) {
                    *g += da * v;
                }
            }
        }
    }
    let n = rows.len() as f64;
    loss /= n;
    let mut reg = 0.0;
    for (k, g) in grad.iter_mut().enumerate() {
        *g /= n;
        if shape.is_weight(k) {
            *g += l2 * params[k];
            reg += params[k] * params[k];
        }
    }
    loss + 0.5 * l2 * reg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(800.0) <= 1.0);
        assert!(sigmoid(-800.0) >= 0.0);
        assert!(softplus(800.0).is_finite());
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn layouts() {
        assert_eq!(logistic_param_len(4), 5);
        assert_eq!(mlp_param_len(3, 2), 6 + 2 + 2 + 1);
        let s = MlpShape { d: 3, hidden: 2 };
        assert!(s.is_weight(0) && s.is_weight(5) && !s.is_weight(6) && s.is_weight(8));
        assert!(!s.is_weight(10));
    }
}
