//! Small synthetic embedding and benchmark files for end-to-end runs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hsr::embedding::{default_freq_ranking, default_stopwords};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Workspace {
    pub embeddings: PathBuf,
    pub wordsim: Vec<PathBuf>,
    pub sts: Vec<PathBuf>,
    pub sentiment: Vec<PathBuf>,
}

const DIM: usize = 12;

fn cos(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// 20 function words from the shipped stop list and 80 content words from the
/// shipped frequency ranking. Content vectors are a latent "meaning" vector
/// plus a shared frequency direction; human scores are derived from the
/// latent vectors.
pub fn generate(dir: &Path, seed: u64) -> Workspace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let function: Vec<String> = default_stopwords().into_iter().take(20).collect();
    let content: Vec<String> = default_freq_ranking().into_iter().take(80).collect();

    let common: Vec<f64> = (0..DIM).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut latent = Vec::new();
    let mut text = String::new();
    for w in &function {
        let v: Vec<f64> = common
            .iter()
            .map(|c| 1.5 * c + 0.3 * rng.random_range(-1.0..1.0))
            .collect();
        write_row(&mut text, w, &v);
    }
    for (i, w) in content.iter().enumerate() {
        let mut z: Vec<f64> = (0..DIM).map(|_| rng.random_range(-1.0..1.0)).collect();
        // first coordinate carries sentiment polarity
        z[0] = if i < 40 { 1.5 } else { -1.5 };
        let weight = rng.random_range(0.2..1.2);
        let v: Vec<f64> = z.iter().zip(&common).map(|(a, c)| a + weight * c).collect();
        write_row(&mut text, w, &v);
        latent.push(z);
    }
    let embeddings = dir.join("synthetic.txt");
    fs::write(&embeddings, text).unwrap();

    let mut wordsim = Vec::new();
    for name in ["toy-sim-a", "toy-sim-b", "toy-sim-c"] {
        let mut out = String::from("# word1\tword2\tscore\n");
        for _ in 0..30 {
            let (i, j) = (rng.random_range(0..80), rng.random_range(0..80));
            let score = 5.0 + 5.0 * cos(&latent[i], &latent[j]) + rng.random_range(-0.5..0.5);
            writeln!(out, "{}\t{}\t{score:.3}", content[i], content[j]).unwrap();
        }
        let path = dir.join(format!("{name}.txt"));
        fs::write(&path, out).unwrap();
        wordsim.push(path);
    }

    let sentence = |rng: &mut ChaCha8Rng| -> (String, Vec<f64>) {
        let mut words = Vec::new();
        let mut sum = vec![0.0; DIM];
        for _ in 0..rng.random_range(2..5) {
            let i = rng.random_range(0..80);
            words.push(content[i].clone());
            for (s, z) in sum.iter_mut().zip(&latent[i]) {
                *s += z;
            }
            words.push(function.choose(rng).unwrap().clone());
        }
        (words.join(" ") + ".", sum)
    };
    let mut sts = Vec::new();
    for name in ["toy-sts-a", "toy-sts-b", "toy-sts-c"] {
        let mut out = String::new();
        for _ in 0..25 {
            let (a, za) = sentence(&mut rng);
            let (b, zb) = sentence(&mut rng);
            let score = (2.5 + 2.5 * cos(&za, &zb) + rng.random_range(-0.3..0.3)).clamp(0.0, 5.0);
            writeln!(out, "{a}\t{b}\t{score:.2}").unwrap();
        }
        let path = dir.join(format!("{name}.txt"));
        fs::write(&path, out).unwrap();
        sts.push(path);
    }

    let mut sentiment = Vec::new();
    for name in ["toy-pol-a", "toy-pol-b"] {
        let mut out = String::new();
        for _ in 0..80 {
            let (text, z) = sentence(&mut rng);
            let flip = rng.random_bool(0.15);
            let label = (z[0] > 0.0) != flip;
            writeln!(out, "{}\t{text}", u8::from(label)).unwrap();
        }
        let path = dir.join(format!("{name}.txt"));
        fs::write(&path, out).unwrap();
        sentiment.push(path);
    }

    Workspace {
        embeddings,
        wordsim,
        sts,
        sentiment,
    }
}

fn write_row(out: &mut String, word: &str, v: &[f64]) {
    out.push_str(word);
    for x in v {
        write!(out, " {x:.6}").unwrap();
    }
    out.push('\n');
}
