//! Multiple-output ridge regression in closed form.
//!
//! `W = (XᵀX + αI)⁻¹ XᵀY` is computed from a single Cholesky factorization of
//! the `P x P` system matrix, shared by every target column. Rows of `X` and
//! `Y` are the embedding coordinates; columns are words.

use nalgebra::{Cholesky, DMatrix, Dyn};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default number of target columns solved together.
pub const DEFAULT_BLOCK_WIDTH: usize = 4096;

/// Fitted `P x K` ridge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionWeights {
    matrix: DMatrix<f64>,
    alpha: f64,
}

impl RegressionWeights {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn predictor_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn target_count(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

fn check_finite(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericalFailure(format!(
            "{what} contains non-finite values"
        )))
    }
}

/// Factorized ridge system for a fixed predictor matrix.
pub struct RidgeSolver<'a> {
    predictors: &'a DMatrix<f64>,
    factor: Cholesky<f64, Dyn>,
    alpha: f64,
}

impl<'a> RidgeSolver<'a> {
    pub fn new(predictors: &'a DMatrix<f64>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if predictors.nrows() == 0 || predictors.ncols() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "predictor matrix is {}x{}",
                predictors.nrows(),
                predictors.ncols()
            )));
        }
        check_finite(predictors, "predictor matrix")?;
        let mut system = predictors.tr_mul(predictors);
        for i in 0..system.nrows() {
            system[(i, i)] += alpha;
        }
        let factor = Cholesky::new(system).ok_or_else(|| {
            Error::NumericalFailure("ridge system matrix is not positive definite".into())
        })?;
        Ok(Self {
            predictors,
            factor,
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn check_targets(&self, targets: &DMatrix<f64>) -> Result<()> {
        if targets.nrows() != self.predictors.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "predictors have {} rows, targets have {}",
                self.predictors.nrows(),
                targets.nrows()
            )));
        }
        if targets.ncols() == 0 {
            return Err(Error::ShapeMismatch("target matrix has no columns".into()));
        }
        check_finite(targets, "target matrix")
    }

    pub fn weights(&self, targets: &DMatrix<f64>) -> Result<RegressionWeights> {
        self.check_targets(targets)?;
        let rhs = self.predictors.tr_mul(targets);
        Ok(RegressionWeights {
            matrix: self.factor.solve(&rhs),
            alpha: self.alpha,
        })
    }

    /// `Y - XW` computed in column blocks of `block_width`, without ever
    /// materializing the full weight matrix. Block boundaries depend only on
    /// `block_width`, so the result does not depend on the thread count.
    pub fn residuals(&self, targets: &DMatrix<f64>, block_width: usize) -> Result<DMatrix<f64>> {
        self.check_targets(targets)?;
        let width = block_width.max(1);
        let k = targets.ncols();
        let starts: Vec<usize> = (0..k).step_by(width).collect();
        let blocks: Vec<DMatrix<f64>> = starts
            .par_iter()
            .map(|&start| {
                let cols = width.min(k - start);
                let y = targets.columns(start, cols);
                let w = self.factor.solve(&self.predictors.tr_mul(&y));
                y - self.predictors * w
            })
            .collect();
        let mut out = DMatrix::zeros(targets.nrows(), k);
        for (start, block) in starts.into_iter().zip(blocks) {
            out.columns_mut(start, block.ncols()).copy_from(&block);
        }
        Ok(out)
    }
}

/// Ridge weights mapping `predictors` (`n x P`) to `targets` (`n x K`).
pub fn ridge_weights(
    predictors: &DMatrix<f64>,
    targets: &DMatrix<f64>,
    alpha: f64,
) -> Result<RegressionWeights> {
    RidgeSolver::new(predictors, alpha)?.weights(targets)
}

/// Removes the part of `targets` explained by `predictors`: `Y - XW`.
pub fn denoise(
    targets: &DMatrix<f64>,
    predictors: &DMatrix<f64>,
    weights: &RegressionWeights,
) -> Result<DMatrix<f64>> {
    let w = weights.matrix();
    if predictors.nrows() != targets.nrows()
        || predictors.ncols() != w.nrows()
        || targets.ncols() != w.ncols()
    {
        return Err(Error::ShapeMismatch(format!(
            "Y is {}x{}, X is {}x{}, W is {}x{}",
            targets.nrows(),
            targets.ncols(),
            predictors.nrows(),
            predictors.ncols(),
            w.nrows(),
            w.ncols()
        )));
    }
    Ok(targets - predictors * w)
}
