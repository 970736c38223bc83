//! Binary logistic regression: mean cross-entropy plus `(λ/2)‖w‖²` with an
//! unpenalized bias, minimized by damped Newton steps with a backtracking line
//! search.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConfig {
    pub l2_lambda: f64,
    pub max_iters: usize,
    /// Stop once the gradient norm falls to this value.
    pub tol: f64,
    pub folds: usize,
    pub shuffle_seed: u64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            l2_lambda: 1e-4,
            max_iters: 1000,
            tol: 1e-8,
            folds: 5,
            shuffle_seed: 42,
        }
    }
}

impl LogRegConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "l2_lambda must be non-negative, got {}",
                self.l2_lambda
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.folds < 2 {
            return Err(Error::InvalidConfig(format!(
                "folds must be at least 2, got {}",
                self.folds
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: DVector<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// False when `max_iters` ran out or the line search stalled before the
    /// gradient tolerance was reached; the best iterate is still returned.
    pub converged: bool,
    pub grad_norm: f64,
    /// Objective value after each accepted step, starting from the initial point.
    pub loss_history: Vec<f64>,
}

impl LogRegModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.decision(x) > 0.0
    }

    /// Fraction of rows of `features` classified correctly.
    pub fn accuracy(&self, features: &DMatrix<f64>, labels: &[bool]) -> f64 {
        let correct = features
            .row_iter()
            .zip(labels)
            .filter(|(row, &y)| {
                let z = self.bias + row.dot(&self.weights.transpose());
                (z > 0.0) == y
            })
            .count();
        correct as f64 / labels.len() as f64
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Objective value and gradient. The gradient's last entry is the bias.
pub fn loss_and_gradient(
    features: &DMatrix<f64>,
    labels: &[bool],
    weights: &DVector<f64>,
    bias: f64,
    l2_lambda: f64,
) -> (f64, DVector<f64>) {
    let m = features.nrows() as f64;
    let z = features * weights;
    let mut loss = 0.0;
    let mut residual = DVector::zeros(features.nrows());
    for (i, (&zi, &y)) in z.iter().zip(labels).enumerate() {
        let zi = zi + bias;
        let y = if y { 1.0 } else { 0.0 };
        loss += softplus(zi) - y * zi;
        residual[i] = sigmoid(zi) - y;
    }
    let n = features.ncols();
    let mut grad = DVector::zeros(n + 1);
    let gw = features.tr_mul(&residual) / m + weights * l2_lambda;
    grad.rows_mut(0, n).copy_from(&gw);
    grad[n] = residual.sum() / m;
    let loss = loss / m + 0.5 * l2_lambda * weights.norm_squared();
    (loss, grad)
}

fn hessian(
    features: &DMatrix<f64>,
    weights: &DVector<f64>,
    bias: f64,
    l2_lambda: f64,
) -> DMatrix<f64> {
    let (m, n) = features.shape();
    let z = features * weights;
    let mut aug = DMatrix::zeros(m, n + 1);
    for i in 0..m {
        let p = sigmoid(z[i] + bias);
        let s = (p * (1.0 - p)).sqrt();
        for j in 0..n {
            aug[(i, j)] = features[(i, j)] * s;
        }
        aug[(i, n)] = s;
    }
    let mut h = aug.tr_mul(&aug) / m as f64;
    for j in 0..n {
        h[(j, j)] += l2_lambda;
    }
    h
}

pub fn train_logreg(
    features: &DMatrix<f64>,
    labels: &[bool],
    cfg: &LogRegConfig,
) -> Result<LogRegModel> {
    cfg.validate()?;
    if features.nrows() != labels.len() {
        return Err(Error::LengthMismatch {
            left: features.nrows(),
            right: labels.len(),
        });
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput(
            "features contain non-finite values".into(),
        ));
    }
    let positives = labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::SingleClass);
    }

    let n = features.ncols();
    let lambda = cfg.l2_lambda;
    let mut w = DVector::zeros(n);
    let mut b = 0.0;
    let (mut loss, mut grad) = loss_and_gradient(features, labels, &w, b, lambda);
    let mut history = vec![loss];
    let mut iterations = 0;
    let mut converged = grad.norm() <= cfg.tol;

    while !converged && iterations < cfg.max_iters {
        iterations += 1;
        let newton = Cholesky::new(hessian(features, &w, b, lambda)).map(|c| -c.solve(&grad));
        let mut direction = match newton {
            Some(d) if d.iter().all(|v| v.is_finite()) && d.dot(&grad) < 0.0 => d,
            _ => -grad.clone(),
        };
        let mut slope = direction.dot(&grad);

        let mut accepted = None;
        for attempt in 0..2 {
            let mut step = 1.0;
            for _ in 0..60 {
                let w_new = &w + direction.rows(0, n) * step;
                let b_new = b + direction[n] * step;
                let (l_new, g_new) = loss_and_gradient(features, labels, &w_new, b_new, lambda);
                if l_new <= loss + 1e-4 * step * slope {
                    accepted = Some((w_new, b_new, l_new, g_new));
                    break;
                }
                step *= 0.5;
            }
            if accepted.is_some() || attempt == 1 {
                break;
            }
            // Newton direction failed; retry along the negative gradient
            direction = -grad.clone();
            slope = direction.dot(&grad);
        }

        let Some((w_new, b_new, l_new, g_new)) = accepted else {
            break;
        };
        w = w_new;
        b = b_new;
        loss = l_new;
        grad = g_new;
        history.push(loss);
        converged = grad.norm() <= cfg.tol;
    }

    let grad_norm = grad.norm();
    if !converged {
        log::warn!(
            "logistic regression stopped after {iterations} iterations with gradient norm {grad_norm:e}"
        );
    }
    Ok(LogRegModel {
        weights: w,
        bias: b,
        iterations,
        converged,
        grad_norm,
        loss_history: history,
    })
}
