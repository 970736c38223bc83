//! Tab-separated benchmark files. Lines starting with `#` and blank lines are
//! ignored.
//!
//! - word pairs: `w1 \t w2 \t score`
//! - sentence pairs: `s1 \t s2 \t score`
//! - sentiment: `label \t text`, label 0 or 1

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WordPair {
    pub word1: String,
    pub word2: String,
    pub human_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordPairDataset {
    pub name: String,
    pub items: Vec<WordPair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentencePair {
    pub sent1: String,
    pub sent2: String,
    pub human_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentencePairDataset {
    pub name: String,
    pub items: Vec<SentencePair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSentence {
    pub text: String,
    pub label: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCorpus {
    pub name: String,
    pub items: Vec<LabeledSentence>,
}

fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| match l {
            Ok(s) => !(s.trim().is_empty() || s.starts_with('#')),
            Err(_) => true,
        })
}

fn bad(name: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Dataset {
        path: name.to_string(),
        line,
        msg: msg.into(),
    }
}

fn parse_score(name: &str, line: usize, field: &str) -> Result<f64> {
    match field.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad(name, line, format!("bad score {field:?}"))),
    }
}

fn split_triple<'a>(name: &str, line: usize, text: &'a str) -> Result<(&'a str, &'a str, &'a str)> {
    let fields: Vec<&str> = text.split('\t').collect();
    match fields.as_slice() {
        [a, b, s] => Ok((a, b, s)),
        _ => Err(bad(
            name,
            line,
            format!("expected 3 tab-separated fields, found {}", fields.len()),
        )),
    }
}

impl WordPairDataset {
    pub fn parse<R: BufRead>(name: &str, reader: R) -> Result<Self> {
        let mut items = Vec::new();
        for (line, text) in data_lines(reader) {
            let text = text?;
            let (a, b, s) = split_triple(name, line, &text)?;
            let (a, b) = (a.trim(), b.trim());
            if a.is_empty() || b.is_empty() {
                return Err(bad(name, line, "empty word"));
            }
            items.push(WordPair {
                word1: a.to_string(),
                word2: b.to_string(),
                human_score: parse_score(name, line, s)?,
            });
        }
        if items.is_empty() {
            return Err(bad(name, 0, "dataset has no items"));
        }
        Ok(Self {
            name: name.to_string(),
            items,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&dataset_name(path), BufReader::new(File::open(path)?))
    }
}

impl SentencePairDataset {
    pub fn parse<R: BufRead>(name: &str, reader: R) -> Result<Self> {
        let mut items = Vec::new();
        for (line, text) in data_lines(reader) {
            let text = text?;
            let (a, b, s) = split_triple(name, line, &text)?;
            items.push(SentencePair {
                sent1: a.to_string(),
                sent2: b.to_string(),
                human_score: parse_score(name, line, s)?,
            });
        }
        if items.is_empty() {
            return Err(bad(name, 0, "dataset has no items"));
        }
        Ok(Self {
            name: name.to_string(),
            items,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&dataset_name(path), BufReader::new(File::open(path)?))
    }
}

impl LabeledCorpus {
    pub fn parse<R: BufRead>(name: &str, reader: R) -> Result<Self> {
        let mut items = Vec::new();
        for (line, text) in data_lines(reader) {
            let text = text?;
            let Some((label, body)) = text.split_once('\t') else {
                return Err(bad(name, line, "expected `label \\t text`"));
            };
            let label = match label.trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(bad(
                        name,
                        line,
                        format!("label must be 0 or 1, got {other:?}"),
                    ))
                }
            };
            items.push(LabeledSentence {
                text: body.to_string(),
                label,
            });
        }
        let positives = items.iter().filter(|s| s.label).count();
        if items.is_empty() {
            return Err(bad(name, 0, "corpus has no items"));
        }
        if positives == 0 || positives == items.len() {
            return Err(Error::SingleClass);
        }
        Ok(Self {
            name: name.to_string(),
            items,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&dataset_name(path), BufReader::new(File::open(path)?))
    }
}

/// File stem, used as the task name in reports.
pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
