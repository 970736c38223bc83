//! All-But-The-Top: mean-center the vocabulary and project out the leading
//! principal directions. Used as the spectral baseline against HSR-RR.

use nalgebra::{DMatrix, DVector};

use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};

/// Relative gap between the last kept and first dropped singular value below
/// which the removed subspace is considered ill-defined.
const DEGENERATE_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbttConfig {
    /// Number of leading components to remove.
    pub d: usize,
}

impl AbttConfig {
    pub fn validate(&self, dim: usize, vocab: usize) -> Result<()> {
        if self.d >= dim.min(vocab) {
            return Err(Error::InvalidConfig(format!(
                "d = {} must be below min(dim, vocab) = {}",
                self.d,
                dim.min(vocab)
            )));
        }
        Ok(())
    }
}

/// Subtracts the column mean from every column.
pub fn mean_center(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    if m.ncols() == 0 {
        return Err(Error::ShapeMismatch(
            "cannot center a matrix with no columns".into(),
        ));
    }
    let mean = m.column_mean();
    let mut centered = m.clone();
    for mut col in centered.column_iter_mut() {
        col -= &mean;
    }
    Ok((centered, mean))
}

#[derive(Debug, Clone)]
pub struct PrincipalComponents {
    /// `n x d`, orthonormal columns in decreasing singular-value order.
    pub components: DMatrix<f64>,
    /// All singular values of the input, descending.
    pub singular_values: Vec<f64>,
    /// Set when the d-th and (d+1)-th singular values nearly coincide.
    pub degenerate: bool,
}

/// Leading left singular vectors of an already centered `n x V` matrix.
///
/// Each component is flipped so its largest-magnitude entry is positive.
pub fn top_principal_components(centered: &DMatrix<f64>, d: usize) -> Result<PrincipalComponents> {
    let (n, v) = centered.shape();
    if d == 0 || d >= n.min(v) {
        return Err(Error::InvalidConfig(format!(
            "need 1 <= d < min(n, V) = {}, got d = {d}",
            n.min(v)
        )));
    }
    if centered.iter().any(|x| !x.is_finite()) {
        return Err(Error::DecompositionFailure(
            "input contains non-finite values".into(),
        ));
    }
    let svd = centered.clone().svd(true, false);
    let u = svd
        .u
        .ok_or_else(|| Error::DecompositionFailure("SVD did not produce U".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();

    let mut components = DMatrix::zeros(n, d);
    for (j, &src) in order.iter().take(d).enumerate() {
        let mut col = u.column(src).clone_owned();
        let pivot = col.iamax();
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        components.set_column(j, &col);
    }

    let (kept, dropped) = (singular_values[d - 1], singular_values[d]);
    let degenerate = kept - dropped <= DEGENERATE_GAP * kept.max(f64::MIN_POSITIVE);
    if degenerate {
        log::warn!(
            "singular values {d} and {} nearly coincide ({kept:e} vs {dropped:e}); \
             removed subspace is ill-defined",
            d + 1
        );
    }
    Ok(PrincipalComponents {
        components,
        singular_values,
        degenerate,
    })
}

/// Fitted mean and directions, reusable on other matrices.
#[derive(Debug, Clone)]
pub struct AbttModel {
    pub mean: DVector<f64>,
    /// `n x d`; zero columns when `d = 0`.
    pub components: DMatrix<f64>,
}

impl AbttModel {
    pub fn fit(m: &DMatrix<f64>, cfg: AbttConfig) -> Result<Self> {
        cfg.validate(m.nrows(), m.ncols())?;
        let (centered, mean) = mean_center(m)?;
        let components = if cfg.d == 0 {
            DMatrix::zeros(m.nrows(), 0)
        } else {
            top_principal_components(&centered, cfg.d)?.components
        };
        Ok(Self { mean, components })
    }

    /// Projects the fitted directions out of already-centered columns.
    pub fn remove_components(&self, centered: &DMatrix<f64>) -> DMatrix<f64> {
        if self.components.ncols() == 0 {
            return centered.clone();
        }
        let coords = self.components.tr_mul(centered);
        centered - &self.components * coords
    }

    /// `(v - mean) - U Uᵀ (v - mean)` for every column.
    pub fn apply(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let mut centered = m.clone();
        for mut col in centered.column_iter_mut() {
            col -= &self.mean;
        }
        self.remove_components(&centered)
    }
}

pub fn abtt_postprocess(table: &EmbeddingTable, cfg: AbttConfig) -> Result<EmbeddingTable> {
    let model = AbttModel::fit(table.vectors(), cfg)?;
    table.with_vectors(model.apply(table.vectors()))
}
