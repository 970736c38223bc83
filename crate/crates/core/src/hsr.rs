//! Half-sibling ridge regression over a function/content split.
//!
//! Content-word vectors are regressed on all function-word vectors and the
//! fit is subtracted. Function-word vectors are then regressed on the original
//! vectors of the most frequent content words and the fit is subtracted.

use crate::embedding::{EmbeddingTable, VocabPartition};
use crate::error::{Error, Result};
use crate::ridge::{RidgeSolver, DEFAULT_BLOCK_WIDTH};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsrConfig {
    /// Regularizer for content words regressed on function words.
    pub alpha1: f64,
    /// Regularizer for function words regressed on content features.
    pub alpha2: f64,
    /// Maximum number of ranked content words used as features.
    pub feature_cap: usize,
    /// Target columns solved per block in the content-word regression.
    pub block_width: usize,
}

impl Default for HsrConfig {
    fn default() -> Self {
        Self {
            alpha1: 50.0,
            alpha2: 50.0,
            feature_cap: 1000,
            block_width: DEFAULT_BLOCK_WIDTH,
        }
    }
}

impl HsrConfig {
    pub fn new(alpha1: f64, alpha2: f64, feature_cap: usize) -> Result<Self> {
        let cfg = Self {
            alpha1,
            alpha2,
            feature_cap,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {a}"
                )));
            }
        }
        if self.feature_cap == 0 {
            return Err(Error::InvalidConfig(
                "feature_cap must be at least 1".into(),
            ));
        }
        if self.block_width == 0 {
            return Err(Error::InvalidConfig(
                "block_width must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Returns a new table with every vector replaced by its HSR-RR residual.
///
/// At most `cfg.feature_cap` of the partition's content features are used.
pub fn hsr_postprocess(
    table: &EmbeddingTable,
    partition: &VocabPartition,
    cfg: &HsrConfig,
) -> Result<EmbeddingTable> {
    cfg.validate()?;
    let (function, content, mut features) = partition.indices(table)?;
    if function.is_empty() || content.is_empty() {
        return Err(Error::EmptyPartition(
            "both word classes must be nonempty".into(),
        ));
    }
    if features.is_empty() {
        return Err(Error::EmptyPartition(
            "no content features available".into(),
        ));
    }
    features.truncate(cfg.feature_cap);

    let function_vecs = table.gather(&function);
    let content_vecs = table.gather(&content);
    let feature_vecs = table.gather(&features);

    let content_clean =
        RidgeSolver::new(&function_vecs, cfg.alpha1)?.residuals(&content_vecs, cfg.block_width)?;
    // regressors are the original feature vectors, not the cleaned ones
    let function_clean =
        RidgeSolver::new(&feature_vecs, cfg.alpha2)?.residuals(&function_vecs, cfg.block_width)?;

    let mut out = table.vectors().clone();
    for (src, &dst) in function.iter().enumerate() {
        out.set_column(dst, &function_clean.column(src));
    }
    for (src, &dst) in content.iter().enumerate() {
        out.set_column(dst, &content_clean.column(src));
    }
    table.with_vectors(out)
}
