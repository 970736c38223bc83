#![allow(dead_code)]

pub mod oracle;
pub mod synth;

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const EMBEDDINGS: [&str; 3] = ["word2vec", "glove", "paragram"];
pub const BASELINES: [&str; 4] = ["orig", "abtt", "cn", "sb"];

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn fixture(name: &str) -> PathBuf {
    data_dir().join("fixtures").join(name)
}

/// A wide score table: one row per task, one column per `embedding_method`.
pub struct WideTable {
    pub tasks: Vec<String>,
    columns: HashMap<String, Vec<f64>>,
}

impl WideTable {
    pub fn load(name: &str) -> Self {
        let text = std::fs::read_to_string(fixture(name)).expect("fixture readable");
        let mut lines = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .unwrap()
            .split('\t')
            .skip(1)
            .map(String::from)
            .collect();
        let mut tasks = Vec::new();
        let mut columns: HashMap<String, Vec<f64>> =
            header.iter().map(|h| (h.clone(), Vec::new())).collect();
        for line in lines {
            let mut fields = line.split('\t');
            tasks.push(fields.next().unwrap().to_string());
            for (h, v) in header.iter().zip(fields) {
                columns.get_mut(h).unwrap().push(v.trim().parse().unwrap());
            }
        }
        Self { tasks, columns }
    }

    pub fn column(&self, embedding: &str, method: &str) -> &[f64] {
        &self.columns[&format!("{embedding}_{method}")]
    }

    pub fn value(&self, task: &str, embedding: &str, method: &str) -> f64 {
        let row = self.tasks.iter().position(|t| t == task).unwrap();
        self.column(embedding, method)[row]
    }

    /// Values of the rows whose task passes `keep`, in table order.
    pub fn rows_where(
        &self,
        embedding: &str,
        method: &str,
        keep: impl Fn(&str) -> bool,
    ) -> Vec<f64> {
        self.tasks
            .iter()
            .zip(self.column(embedding, method))
            .filter(|(t, _)| keep(t))
            .map(|(_, &v)| v)
            .collect()
    }
}

/// `STS-2012`, `STS-2013`, ... are averages of the rows that share the prefix.
pub fn is_year_average(task: &str) -> bool {
    task.len() == 8 && task.starts_with("STS-") && task[4..].chars().all(|c| c.is_ascii_digit())
}

/// Published p-value table keyed by (embedding, "task_method").
pub fn load_pvalues() -> HashMap<(String, String), f64> {
    let text = std::fs::read_to_string(fixture("table4_pvalues.tsv")).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split('\t').skip(1).collect();
    let mut out = HashMap::new();
    for line in lines {
        let mut fields = line.split('\t');
        let emb = fields.next().unwrap();
        for (h, v) in header.iter().zip(fields) {
            out.insert((emb.to_string(), h.to_string()), v.parse().unwrap());
        }
    }
    out
}

/// Within `units` of the third significant digit of `published`.
pub fn matches_three_digits(computed: f64, published: f64, units: f64) -> bool {
    let exp = published.abs().log10().floor();
    let ulp = 10f64.powf(exp - 2.0);
    (computed - published).abs() <= units * ulp + 1e-15
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}
