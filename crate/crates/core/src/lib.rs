//! Half-sibling ridge regression (HSR-RR) postprocessing for pretrained word
//! embeddings.
//!
//! Function-word vectors and content-word vectors are treated as half-siblings
//! that share a common noise source. Each side is regressed on the other with
//! ridge regression and the fitted part is subtracted, leaving the component
//! that the other side cannot predict.
//!
//! The crate also carries the All-But-The-Top baseline, the evaluation
//! protocols used to compare postprocessing methods (word similarity, STS,
//! sentiment classification) and a paired one-tailed t-test.

pub mod abtt;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod hsr;
pub mod metrics;
pub mod report;
pub mod ridge;

pub use abtt::{abtt_postprocess, mean_center, top_principal_components, AbttConfig};
pub use embedding::{
    parse_embeddings, partition_vocab, write_embeddings, EmbeddingTable, HeaderMode, ParseOptions,
    Parsed, VocabPartition, WriteOptions,
};
pub use error::{Error, Result};
pub use hsr::{hsr_postprocess, HsrConfig};
pub use metrics::{cosine_similarity, paired_t_test_one_tailed, pearson, spearman, TTestResult};
pub use report::RunReport;
pub use ridge::{denoise, ridge_weights, RegressionWeights, RidgeSolver};
