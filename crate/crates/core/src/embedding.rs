//! Text embedding files and the function/content vocabulary split.
//!
//! The accepted format is one word per line, `token x1 x2 ... xn`, separated
//! by arbitrary whitespace. An optional first line `V n` (two integers) is a
//! header as written by word2vec and fastText; GloVe files have none.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVectorView};

use crate::error::{Error, Result};

const STOPWORDS_EN: &str = include_str!("../data/stopwords_en.txt");
const FREQ_RANKING_EN: &str = include_str!("../data/freq_ranking_en.txt");

/// Vocabulary plus an `n x V` matrix whose columns are the word vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    words: Vec<String>,
    index: HashMap<String, usize>,
    vectors: DMatrix<f64>,
}

impl EmbeddingTable {
    /// Builds a table, checking that tokens are unique, the column count
    /// matches the vocabulary and every value is finite.
    pub fn new(words: Vec<String>, vectors: DMatrix<f64>) -> Result<Self> {
        if vectors.nrows() == 0 {
            return Err(Error::InvalidTable("dimension must be at least 1".into()));
        }
        if words.len() != vectors.ncols() {
            return Err(Error::InvalidTable(format!(
                "{} words but {} vectors",
                words.len(),
                vectors.ncols()
            )));
        }
        if let Some(pos) = vectors.iter().position(|v| !v.is_finite()) {
            let word = &words[pos / vectors.nrows()];
            return Err(Error::InvalidTable(format!(
                "non-finite value in vector of {word:?}"
            )));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::InvalidTable(format!("duplicate token {w:?}")));
            }
        }
        Ok(Self {
            words,
            index,
            vectors,
        })
    }

    /// Same vocabulary, new vectors.
    pub fn with_vectors(&self, vectors: DMatrix<f64>) -> Result<Self> {
        if vectors.shape() != self.vectors.shape() {
            return Err(Error::ShapeMismatch(format!(
                "expected {:?}, got {:?}",
                self.vectors.shape(),
                vectors.shape()
            )));
        }
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure(
                "postprocessed vectors are not finite".into(),
            ));
        }
        Ok(Self {
            words: self.words.clone(),
            index: self.index.clone(),
            vectors,
        })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<DVectorView<'_, f64>> {
        self.index_of(word).map(|i| self.vectors.column(i))
    }

    /// Copies the given columns, in order, into a new `n x k` matrix.
    pub fn gather(&self, indices: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), indices.len(), |r, c| {
            self.vectors[(r, indices[c])]
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// A first line made of exactly two integers is a header.
    #[default]
    Auto,
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub header: HeaderMode,
    /// Fold every token to lowercase on ingest. Collisions count as duplicates.
    pub lowercase: bool,
}

/// Result of parsing: the table plus what was dropped or consumed on the way.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub table: EmbeddingTable,
    /// Later occurrences of an already-seen token; the first one wins.
    pub duplicates: usize,
    /// `(V, n)` from the header line when one was consumed.
    pub header: Option<(usize, usize)>,
}

fn header_fields(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let v = it.next()?.parse().ok()?;
    let n = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((v, n))
}

pub fn parse_embeddings<R: BufRead>(reader: R, opts: ParseOptions) -> Result<Parsed> {
    let mut words = Vec::new();
    let mut seen = HashSet::new();
    let mut data = Vec::new();
    let mut dim: Option<usize> = None;
    let mut header = None;
    let mut duplicates = 0;
    let mut first = true;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        if first {
            first = false;
            match opts.header {
                HeaderMode::Auto => {
                    if let Some(h) = header_fields(&line) {
                        header = Some(h);
                        continue;
                    }
                }
                HeaderMode::Yes => {
                    let h = header_fields(&line).ok_or_else(|| {
                        Error::InvalidTable(format!("line {lineno}: expected a `V n` header"))
                    })?;
                    header = Some(h);
                    continue;
                }
                HeaderMode::No => {}
            }
        }

        let mut fields = line.split_whitespace();
        let token = fields.next().expect("non-blank line has a field");
        let start = data.len();
        for f in fields {
            let x: f64 = f.parse().map_err(|_| Error::NonFiniteValue {
                line: lineno,
                value: f.to_string(),
            })?;
            if !x.is_finite() {
                return Err(Error::NonFiniteValue {
                    line: lineno,
                    value: f.to_string(),
                });
            }
            data.push(x);
        }
        let found = data.len() - start;
        let expected = *dim.get_or_insert(found);
        if found != expected || found == 0 {
            return Err(Error::DimensionMismatch {
                line: lineno,
                expected: header.map_or(expected, |(_, n)| n),
                found,
            });
        }
        if let Some((_, n)) = header {
            if n != found {
                return Err(Error::DimensionMismatch {
                    line: lineno,
                    expected: n,
                    found,
                });
            }
        }

        let token = if opts.lowercase {
            token.to_lowercase()
        } else {
            token.to_string()
        };
        if seen.contains(&token) {
            duplicates += 1;
            data.truncate(start);
            continue;
        }
        seen.insert(token.clone());
        words.push(token);
    }

    let Some(n) = dim else {
        return Err(Error::EmptyInput);
    };
    if duplicates > 0 {
        log::warn!("skipped {duplicates} duplicate token(s); first occurrence kept");
    }
    if let Some((v, _)) = header {
        if v != words.len() + duplicates {
            log::warn!(
                "header declares {v} words, file has {}",
                words.len() + duplicates
            );
        }
    }
    let vectors = DMatrix::from_vec(n, words.len(), data);
    Ok(Parsed {
        table: EmbeddingTable::new(words, vectors)?,
        duplicates,
        header,
    })
}

pub fn read_embeddings(path: &Path, opts: ParseOptions) -> Result<Parsed> {
    let file = File::open(path)?;
    parse_embeddings(BufReader::new(file), opts)
}

#[derive(Debug, Clone, Copy)]
pub struct WriteOptions {
    pub header: bool,
    /// Digits after the decimal point.
    pub precision: usize,
}

impl Default for WriteOptions {
    fn default() -> Self {
        Self {
            header: false,
            precision: 6,
        }
    }
}

fn format_value(x: f64, precision: usize, buf: &mut String) {
    use std::fmt::Write as _;
    let start = buf.len();
    write!(buf, "{x:.precision$}").unwrap();
    if buf[start..].contains('.') {
        let trimmed = buf[start..]
            .trim_end_matches('0')
            .trim_end_matches('.')
            .len();
        buf.truncate(start + trimmed);
    }
    if &buf[start..] == "-0" {
        buf.truncate(start);
        buf.push('0');
    }
}

pub fn write_embeddings<W: Write>(
    table: &EmbeddingTable,
    mut writer: W,
    opts: WriteOptions,
) -> Result<()> {
    if table.is_empty() {
        return Ok(());
    }
    if opts.header {
        writeln!(writer, "{} {}", table.len(), table.dim())?;
    }
    let mut line = String::new();
    for (word, col) in table.words().iter().zip(table.vectors().column_iter()) {
        line.clear();
        line.push_str(word);
        for &x in col.iter() {
            line.push(' ');
            format_value(x, opts.precision, &mut line);
        }
        line.push('\n');
        writer.write_all(line.as_bytes())?;
    }
    writer.flush()?;
    Ok(())
}

/// One token per line, blank lines ignored.
pub fn parse_word_list<R: BufRead>(reader: R) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() {
            out.push(t.to_string());
        }
    }
    Ok(out)
}

pub fn read_word_list(path: &Path) -> Result<Vec<String>> {
    parse_word_list(BufReader::new(File::open(path)?))
}

/// The 179-entry English stop-word list shipped with the crate.
pub fn default_stopwords() -> Vec<String> {
    STOPWORDS_EN
        .lines()
        .map(str::to_string)
        .filter(|s| !s.is_empty())
        .collect()
}

/// English content words, most frequent first.
pub fn default_freq_ranking() -> Vec<String> {
    FREQ_RANKING_EN
        .lines()
        .map(str::to_string)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Disjoint split of a table's vocabulary into function and content words,
/// plus the ranked subset of content words used as regressors when the
/// function-word vectors are postprocessed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabPartition {
    function_words: BTreeSet<String>,
    content_words: BTreeSet<String>,
    content_features: Vec<String>,
}

impl VocabPartition {
    pub fn function_words(&self) -> &BTreeSet<String> {
        &self.function_words
    }

    pub fn content_words(&self) -> &BTreeSet<String> {
        &self.content_words
    }

    pub fn content_features(&self) -> &[String] {
        &self.content_features
    }

    /// Column indices into `table`: function words and content words in stored
    /// order, features in ranking order.
    pub(crate) fn indices(
        &self,
        table: &EmbeddingTable,
    ) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        if self.function_words.len() + self.content_words.len() != table.len() {
            return Err(Error::ShapeMismatch(format!(
                "partition covers {} tokens, table has {}",
                self.function_words.len() + self.content_words.len(),
                table.len()
            )));
        }
        let mut function = Vec::with_capacity(self.function_words.len());
        let mut content = Vec::with_capacity(self.content_words.len());
        for (i, w) in table.words().iter().enumerate() {
            if self.function_words.contains(w) {
                function.push(i);
            } else if self.content_words.contains(w) {
                content.push(i);
            } else {
                return Err(Error::ShapeMismatch(format!(
                    "token {w:?} is not in the partition"
                )));
            }
        }
        let features = self
            .content_features
            .iter()
            .map(|w| {
                table
                    .index_of(w)
                    .ok_or_else(|| Error::ShapeMismatch(format!("feature {w:?} not in table")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((function, content, features))
    }
}

pub fn partition_vocab<S: AsRef<str>>(
    table: &EmbeddingTable,
    stoplist: &HashSet<String>,
    freq_ranking: &[S],
    cap: usize,
) -> Result<VocabPartition> {
    if stoplist.is_empty() {
        return Err(Error::InvalidConfig("stop list is empty".into()));
    }
    if cap == 0 {
        return Err(Error::InvalidConfig(
            "content feature cap must be at least 1".into(),
        ));
    }
    let (function_words, content_words): (BTreeSet<String>, BTreeSet<String>) = table
        .words()
        .iter()
        .cloned()
        .partition(|w| stoplist.contains(w));
    if function_words.is_empty() {
        return Err(Error::EmptyPartition(
            "no function words in vocabulary".into(),
        ));
    }
    if content_words.is_empty() {
        return Err(Error::EmptyPartition(
            "no content words in vocabulary".into(),
        ));
    }
    let mut picked = HashSet::new();
    let content_features = freq_ranking
        .iter()
        .map(AsRef::as_ref)
        .filter(|w| content_words.contains(*w) && picked.insert(*w))
        .take(cap)
        .map(str::to_string)
        .collect();
    Ok(VocabPartition {
        function_words,
        content_words,
        content_features,
    })
}
