//! Evaluation protocols: word similarity (Spearman), semantic textual
//! similarity (Pearson on averaged sentence vectors) and sentiment
//! classification (logistic regression, k-fold cross-validation).

pub mod datasets;
pub mod logreg;
pub mod tokenize;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::metrics::{cosine_similarity, pearson, spearman};

pub use datasets::{LabeledCorpus, SentencePairDataset, WordPairDataset};
pub use logreg::{train_logreg, LogRegConfig, LogRegModel};
pub use tokenize::tokenize;

/// Averaged word vector of a sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceEmbedding {
    pub vector: DVector<f64>,
    pub used: usize,
    pub oov: usize,
}

/// Mean of the in-vocabulary token vectors, counted with multiplicity.
pub fn sentence_embedding<S: AsRef<str>>(
    table: &EmbeddingTable,
    tokens: &[S],
) -> Result<SentenceEmbedding> {
    let mut sum = DVector::zeros(table.dim());
    let (mut used, mut oov) = (0, 0);
    for t in tokens {
        match table.vector(t.as_ref()) {
            Some(v) => {
                sum += v;
                used += 1;
            }
            None => oov += 1,
        }
    }
    if used == 0 {
        return Err(Error::EmptySentence);
    }
    Ok(SentenceEmbedding {
        vector: sum / used as f64,
        used,
        oov,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordSimResult {
    pub spearman_rho: f64,
    pub pairs_used: usize,
    pub pairs_skipped: usize,
}

/// Pairs with an out-of-vocabulary word (or a zero vector) are skipped.
pub fn eval_word_similarity(table: &EmbeddingTable, ds: &WordPairDataset) -> Result<WordSimResult> {
    let mut predicted = Vec::with_capacity(ds.items.len());
    let mut human = Vec::with_capacity(ds.items.len());
    for pair in &ds.items {
        let (Some(a), Some(b)) = (table.vector(&pair.word1), table.vector(&pair.word2)) else {
            continue;
        };
        if let Ok(c) = cosine_similarity(a.as_slice(), b.as_slice()) {
            predicted.push(c);
            human.push(pair.human_score);
        }
    }
    let used = predicted.len();
    if used < 3 {
        return Err(Error::TooFewPairs { used, needed: 3 });
    }
    Ok(WordSimResult {
        spearman_rho: spearman(&predicted, &human)?,
        pairs_used: used,
        pairs_skipped: ds.items.len() - used,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StsResult {
    /// Pearson correlation times 100.
    pub pearson_x100: f64,
    pub pairs_used: usize,
    pub pairs_skipped: usize,
}

/// Pairs where either sentence has no in-vocabulary token are skipped.
pub fn eval_sts(table: &EmbeddingTable, ds: &SentencePairDataset) -> Result<StsResult> {
    let mut predicted = Vec::with_capacity(ds.items.len());
    let mut human = Vec::with_capacity(ds.items.len());
    for pair in &ds.items {
        let a = sentence_embedding(table, &tokenize(&pair.sent1));
        let b = sentence_embedding(table, &tokenize(&pair.sent2));
        let (Ok(a), Ok(b)) = (a, b) else {
            continue;
        };
        if let Ok(c) = cosine_similarity(a.vector.as_slice(), b.vector.as_slice()) {
            predicted.push(c);
            human.push(pair.human_score);
        }
    }
    let used = predicted.len();
    if used < 3 {
        return Err(Error::TooFewPairs { used, needed: 3 });
    }
    Ok(StsResult {
        pearson_x100: 100.0 * pearson(&predicted, &human)?,
        pairs_used: used,
        pairs_skipped: ds.items.len() - used,
    })
}

/// Seeded Fisher-Yates shuffle of `0..count`, cut into `folds` contiguous
/// folds whose sizes differ by at most one.
pub fn fold_assignment(count: usize, folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..count).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    (0..folds)
        .map(|f| order[f * count / folds..(f + 1) * count / folds].to_vec())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentimentResult {
    pub mean_accuracy: f64,
    pub per_fold: Vec<f64>,
    /// Examples dropped because no token was in the vocabulary.
    pub dropped: usize,
}

fn rows(features: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), features.ncols(), |r, c| features[(idx[r], c)])
}

pub fn eval_sentiment_cv(
    table: &EmbeddingTable,
    corpus: &LabeledCorpus,
    cfg: &LogRegConfig,
) -> Result<SentimentResult> {
    cfg.validate()?;
    let mut vectors = Vec::with_capacity(corpus.items.len());
    let mut labels = Vec::with_capacity(corpus.items.len());
    for item in &corpus.items {
        if let Ok(e) = sentence_embedding(table, &tokenize(&item.text)) {
            vectors.push(e.vector);
            labels.push(item.label);
        }
    }
    let dropped = corpus.items.len() - labels.len();
    let positives = labels.iter().filter(|&&y| y).count();
    let negatives = labels.len() - positives;
    if positives.min(negatives) < cfg.folds {
        return Err(Error::TooFewExamples(format!(
            "{positives} positive and {negatives} negative usable examples for {} folds",
            cfg.folds
        )));
    }

    let features = DMatrix::from_fn(vectors.len(), table.dim(), |r, c| vectors[r][c]);
    let folds = fold_assignment(labels.len(), cfg.folds, cfg.shuffle_seed);
    let mut per_fold = Vec::with_capacity(folds.len());
    for (k, test) in folds.iter().enumerate() {
        let train: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        let train_y: Vec<bool> = train.iter().map(|&i| labels[i]).collect();
        let test_y: Vec<bool> = test.iter().map(|&i| labels[i]).collect();
        let test_x = rows(&features, test);

        let pos = train_y.iter().filter(|&&y| y).count();
        let accuracy = if pos == 0 || pos == train_y.len() {
            // one-class training fold: the loss is minimized by a constant prediction
            let constant = pos > 0;
            test_y.iter().filter(|&&y| y == constant).count() as f64 / test_y.len() as f64
        } else {
            let model = train_logreg(&rows(&features, &train), &train_y, cfg)?;
            model.accuracy(&test_x, &test_y)
        };
        per_fold.push(accuracy);
    }
    let mean_accuracy = per_fold.iter().sum::<f64>() / per_fold.len() as f64;
    Ok(SentimentResult {
        mean_accuracy,
        per_fold,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::datasets::{LabeledSentence, SentencePair, WordPair};

    fn table(entries: &[(&str, &[f64])]) -> EmbeddingTable {
        let n = entries[0].1.len();
        let data: Vec<f64> = entries
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        EmbeddingTable::new(
            entries.iter().map(|(w, _)| w.to_string()).collect(),
            DMatrix::from_vec(n, entries.len(), data),
        )
        .unwrap()
    }

    #[test]
    fn sentence_average() {
        let t = table(&[("a", &[1.0, 0.0]), ("b", &[0.0, 1.0])]);
        let e = sentence_embedding(&t, &["a", "b"]).unwrap();
        assert_eq!(e.vector.as_slice(), &[0.5, 0.5]);
        let e = sentence_embedding(&t, &["a", "a", "zzz"]).unwrap();
        assert_eq!(e.vector.as_slice(), &[1.0, 0.0]);
        assert_eq!((e.used, e.oov), (2, 1));
        assert!(matches!(
            sentence_embedding(&t, &["zzz"]),
            Err(Error::EmptySentence)
        ));
        assert!(matches!(
            sentence_embedding::<&str>(&t, &[]),
            Err(Error::EmptySentence)
        ));
    }

    fn pairs(items: &[(&str, &str, f64)]) -> WordPairDataset {
        WordPairDataset {
            name: "t".into(),
            items: items
                .iter()
                .map(|&(a, b, s)| WordPair {
                    word1: a.into(),
                    word2: b.into(),
                    human_score: s,
                })
                .collect(),
        }
    }

    #[test]
    fn word_similarity_order_and_oov() {
        let t = table(&[
            ("a", &[1.0, 0.0]),
            ("b", &[1.0, 0.1]),
            ("c", &[1.0, 1.0]),
            ("d", &[0.0, 1.0]),
        ]);
        let ds = pairs(&[
            ("a", "b", 9.0),
            ("a", "c", 5.0),
            ("a", "d", 1.0),
            ("a", "zz", 3.0),
        ]);
        let r = eval_word_similarity(&t, &ds).unwrap();
        assert!((r.spearman_rho - 1.0).abs() < 1e-12);
        assert_eq!((r.pairs_used, r.pairs_skipped), (3, 1));
    }

    #[test]
    fn word_similarity_too_few() {
        let t = table(&[("a", &[1.0, 0.0]), ("b", &[0.0, 1.0])]);
        let ds = pairs(&[("a", "b", 1.0), ("a", "x", 2.0), ("a", "a", 3.0)]);
        assert!(matches!(
            eval_word_similarity(&t, &ds),
            Err(Error::TooFewPairs { used: 2, .. })
        ));
    }

    #[test]
    fn sts_constant_cosines_are_degenerate() {
        let t = table(&[("a", &[1.0, 0.0]), ("b", &[0.0, 1.0])]);
        let ds = SentencePairDataset {
            name: "s".into(),
            items: ["a b", "b a", "a a b b"]
                .iter()
                .enumerate()
                .map(|(i, s)| SentencePair {
                    sent1: s.to_string(),
                    sent2: "b a".into(),
                    human_score: i as f64,
                })
                .collect(),
        };
        assert!(matches!(eval_sts(&t, &ds), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn folds_partition_indices() {
        for (count, folds) in [(10, 5), (13, 5), (4, 2), (7, 3)] {
            let f = fold_assignment(count, folds, 42);
            assert_eq!(f.len(), folds);
            let mut all: Vec<usize> = f.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..count).collect::<Vec<_>>());
            let sizes: Vec<usize> = f.iter().map(Vec::len).collect();
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
        assert_eq!(fold_assignment(20, 4, 1), fold_assignment(20, 4, 1));
        assert_ne!(fold_assignment(20, 4, 1), fold_assignment(20, 4, 2));
    }

    #[test]
    fn two_folds_on_four_examples() {
        let t = table(&[
            ("good", &[1.0, 0.2]),
            ("bad", &[-1.0, 0.1]),
            ("fine", &[0.8, -0.3]),
            ("awful", &[-0.9, -0.2]),
        ]);
        let corpus = LabeledCorpus {
            name: "c".into(),
            items: [
                ("good", true),
                ("bad", false),
                ("fine", true),
                ("awful", false),
            ]
            .iter()
            .map(|&(w, l)| LabeledSentence {
                text: w.into(),
                label: l,
            })
            .collect(),
        };
        let cfg = LogRegConfig {
            folds: 2,
            ..Default::default()
        };
        let r = eval_sentiment_cv(&t, &corpus, &cfg).unwrap();
        assert_eq!(r.per_fold.len(), 2);
        assert_eq!(r.mean_accuracy, (r.per_fold[0] + r.per_fold[1]) / 2.0);
        let cfg = LogRegConfig {
            folds: 3,
            ..Default::default()
        };
        assert!(matches!(
            eval_sentiment_cv(&t, &corpus, &cfg),
            Err(Error::TooFewExamples(_))
        ));
    }
}
