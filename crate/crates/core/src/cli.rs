//! `hsr` command line: postprocess embeddings, evaluate them, and test the
//! significance of score differences.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::abtt::{abtt_postprocess, AbttConfig};
use crate::embedding::{
    default_freq_ranking, default_stopwords, partition_vocab, read_embeddings, read_word_list,
    write_embeddings, EmbeddingTable, HeaderMode, ParseOptions, WriteOptions,
};
use crate::error::Result;
use crate::eval::{
    eval_sentiment_cv, eval_sts, eval_word_similarity, LabeledCorpus, LogRegConfig,
    SentencePairDataset, WordPairDataset,
};
use crate::hsr::{hsr_postprocess, HsrConfig};
use crate::metrics::paired_t_test_one_tailed;
use crate::report::{align, format_sci, RunReport};
use crate::ridge::DEFAULT_BLOCK_WIDTH;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hsr",
    version,
    about = "Half-sibling ridge regression for word embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write postprocessed embeddings.
    Postprocess(PostprocessArgs),
    /// Score embeddings on word-similarity, STS or sentiment datasets.
    Evaluate(EvaluateArgs),
    /// Paired one-tailed t-test between two score reports.
    Significance(SignificanceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    #[value(name = "hsr-rr")]
    HsrRr,
    Abtt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeaderArg {
    Auto,
    Yes,
    No,
}

impl From<HeaderArg> for HeaderMode {
    fn from(h: HeaderArg) -> Self {
        match h {
            HeaderArg::Auto => HeaderMode::Auto,
            HeaderArg::Yes => HeaderMode::Yes,
            HeaderArg::No => HeaderMode::No,
        }
    }
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn non_negative_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be non-negative, got {s}"))
    }
}

fn count_at_least<const MIN: usize>(s: &str) -> std::result::Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("{s:?} is not a count"))?;
    if v >= MIN {
        Ok(v)
    } else {
        Err(format!("must be at least {MIN}, got {v}"))
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Fold vocabulary tokens to lowercase on load.
    #[arg(long)]
    lowercase: bool,
    /// Whether the embedding file starts with a `V n` header line.
    #[arg(long, value_enum, default_value = "auto")]
    header: HeaderArg,
}

impl InputArgs {
    fn options(&self) -> ParseOptions {
        ParseOptions {
            header: self.header.into(),
            lowercase: self.lowercase,
        }
    }
}

#[derive(Debug, Args)]
struct PostprocessArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, default_value_t = 50.0, value_parser = positive_f64)]
    alpha1: f64,
    #[arg(long, default_value_t = 50.0, value_parser = positive_f64)]
    alpha2: f64,
    /// Number of most frequent content words used as regressors for function words.
    #[arg(long, default_value_t = 1000, value_parser = count_at_least::<1>)]
    top_content: usize,
    /// Stop-word list, one token per line (default: bundled English list).
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Content-word frequency ranking, most frequent first (default: bundled list).
    #[arg(long)]
    freq_ranking: Option<PathBuf>,
    /// Leading principal components to remove (abtt).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BLOCK_WIDTH, value_parser = count_at_least::<1>)]
    block_width: usize,
    /// Decimal digits written per value.
    #[arg(long, default_value_t = 6)]
    precision: usize,
    /// Write a `V n` header line.
    #[arg(long)]
    write_header: bool,
    #[command(flatten)]
    input_opts: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Task {
    Wordsim,
    Sts,
    Sentiment,
}

impl Task {
    fn label(self) -> &'static str {
        match self {
            Task::Wordsim => "wordsim",
            Task::Sts => "sts",
            Task::Sentiment => "sentiment",
        }
    }

    fn format_score(self, score: f64) -> String {
        match self {
            Task::Sts => format!("{score:.2}"),
            Task::Wordsim | Task::Sentiment => format!("{score:.4}"),
        }
    }
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    embeddings: PathBuf,
    #[arg(long, value_enum)]
    task: Task,
    #[arg(long, num_args = 1.., required = true)]
    data: Vec<PathBuf>,
    /// Label recorded in the report header.
    #[arg(long, default_value = "orig")]
    method: String,
    /// Write the TSV report here; the human-readable table then goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-4, value_parser = non_negative_f64)]
    l2_lambda: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
    tol: f64,
    #[arg(long, default_value_t = 5, value_parser = count_at_least::<2>)]
    folds: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    input_opts: InputArgs,
}

#[derive(Debug, Args)]
struct SignificanceArgs {
    #[arg(long)]
    baseline: PathBuf,
    #[arg(long)]
    treatment: PathBuf,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Postprocess(a) => cmd_postprocess(&a, out, err),
        Command::Evaluate(a) => cmd_evaluate(&a, out, err),
        Command::Significance(a) => cmd_significance(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn load_table(path: &Path, opts: &InputArgs) -> Result<EmbeddingTable> {
    let parsed = read_embeddings(path, opts.options())?;
    Ok(parsed.table)
}

fn cmd_postprocess(a: &PostprocessArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    if a.method == Method::Abtt && a.d.is_none() {
        writeln!(err, "error: --method abtt requires --d <K>")?;
        return Ok(EXIT_USAGE);
    }
    let table = load_table(&a.input, &a.input_opts)?;
    writeln!(out, "vocab: {}  dim: {}", table.len(), table.dim())?;

    let processed = match a.method {
        Method::HsrRr => {
            let stoplist: HashSet<String> = match &a.stopwords {
                Some(p) => read_word_list(p)?.into_iter().collect(),
                None => default_stopwords().into_iter().collect(),
            };
            let ranking = match &a.freq_ranking {
                Some(p) => read_word_list(p)?,
                None => default_freq_ranking(),
            };
            let partition = partition_vocab(&table, &stoplist, &ranking, a.top_content)?;
            writeln!(
                out,
                "function words: {}  content words: {}  content features: {}",
                partition.function_words().len(),
                partition.content_words().len(),
                partition.content_features().len()
            )?;
            let cfg = HsrConfig {
                alpha1: a.alpha1,
                alpha2: a.alpha2,
                feature_cap: a.top_content,
                block_width: a.block_width,
            };
            hsr_postprocess(&table, &partition, &cfg)?
        }
        Method::Abtt => {
            let d = a.d.expect("checked above");
            writeln!(out, "removing {d} principal component(s)")?;
            abtt_postprocess(&table, AbttConfig { d })?
        }
    };

    let file = File::create(&a.output)?;
    let opts = WriteOptions {
        header: a.write_header,
        precision: a.precision,
    };
    write_embeddings(&processed, BufWriter::new(file), opts)?;
    writeln!(out, "wrote {}", a.output.display())?;
    writeln!(out, "wall time: {:.3}s", started.elapsed().as_secs_f64())?;
    Ok(EXIT_OK)
}

fn evaluate_one(
    table: &EmbeddingTable,
    task: Task,
    path: &Path,
    cfg: &LogRegConfig,
) -> Result<(String, f64, String)> {
    match task {
        Task::Wordsim => {
            let ds = WordPairDataset::load(path)?;
            let r = eval_word_similarity(table, &ds)?;
            let note = format!("{} pairs used, {} skipped", r.pairs_used, r.pairs_skipped);
            Ok((ds.name, r.spearman_rho, note))
        }
        Task::Sts => {
            let ds = SentencePairDataset::load(path)?;
            let r = eval_sts(table, &ds)?;
            let note = format!("{} pairs used, {} skipped", r.pairs_used, r.pairs_skipped);
            Ok((ds.name, r.pearson_x100, note))
        }
        Task::Sentiment => {
            let ds = LabeledCorpus::load(path)?;
            let r = eval_sentiment_cv(table, &ds, cfg)?;
            let folds: Vec<String> = r.per_fold.iter().map(|a| format!("{a:.4}")).collect();
            let note = format!("folds [{}], {} dropped", folds.join(", "), r.dropped);
            Ok((ds.name, r.mean_accuracy, note))
        }
    }
}

fn cmd_evaluate(a: &EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    let table = load_table(&a.embeddings, &a.input_opts)?;
    let cfg = LogRegConfig {
        l2_lambda: a.l2_lambda,
        max_iters: a.max_iters,
        tol: a.tol,
        folds: a.folds,
        shuffle_seed: a.seed,
    };
    cfg.validate()?;

    let results: Vec<Result<(String, f64, String)>> = a
        .data
        .par_iter()
        .map(|p| evaluate_one(&table, a.task, p, &cfg))
        .collect();

    let mut report = RunReport::new(a.method.clone());
    report
        .metadata
        .push(("embeddings".into(), a.embeddings.display().to_string()));
    report.metadata.push(("task".into(), a.task.label().into()));
    report
        .metadata
        .push(("vocab".into(), table.len().to_string()));
    report
        .metadata
        .push(("dim".into(), table.dim().to_string()));
    if a.task == Task::Sentiment {
        report.metadata.push((
            "logreg".into(),
            format!(
                "l2_lambda={} max_iters={} tol={} folds={} seed={}",
                cfg.l2_lambda, cfg.max_iters, cfg.tol, cfg.folds, cfg.shuffle_seed
            ),
        ));
    }

    let mut failed = 0;
    let mut table_lines = Vec::new();
    for (path, result) in a.data.iter().zip(results) {
        match result {
            Ok((name, score, note)) => {
                table_lines.push(format!(
                    "{name:<32} {:>10}  ({note})",
                    a.task.format_score(score)
                ));
                report.per_task.push((name, score));
            }
            Err(e) => {
                failed += 1;
                writeln!(err, "error: {}: {e}", path.display())?;
            }
        }
    }
    report.metadata.push((
        "elapsed_s".into(),
        format!("{:.3}", started.elapsed().as_secs_f64()),
    ));

    let mut human = String::new();
    human.push_str(&format!(
        "method: {}  task: {}\n",
        report.method,
        a.task.label()
    ));
    for l in &table_lines {
        human.push_str(l);
        human.push('\n');
    }
    if let Some(agg) = report.aggregate() {
        human.push_str(&format!(
            "{:<32} {:>10}\n",
            "aggregate",
            a.task.format_score(agg)
        ));
    }

    if report.per_task.is_empty() {
        write!(err, "{human}")?;
        return Ok(EXIT_FAILURE);
    }
    match &a.output {
        Some(path) => {
            std::fs::write(path, report.to_tsv())?;
            write!(out, "{human}")?;
        }
        None => {
            write!(out, "{}", report.to_tsv())?;
            write!(err, "{human}")?;
        }
    }
    Ok(if failed > 0 { EXIT_FAILURE } else { EXIT_OK })
}

fn cmd_significance(a: &SignificanceArgs, out: &mut dyn Write) -> Result<i32> {
    let baseline = RunReport::load(&a.baseline)?;
    let treatment = RunReport::load(&a.treatment)?;
    let (tasks, b, t) = align(&baseline, &treatment)?;
    let r = paired_t_test_one_tailed(&b, &t)?;
    writeln!(
        out,
        "baseline: {}  treatment: {}  tasks: {}",
        baseline.method,
        treatment.method,
        tasks.len()
    )?;
    writeln!(out, "mean difference: {:.6}", r.mean_diff)?;
    writeln!(out, "t = {:.4}", r.t_stat)?;
    writeln!(out, "df = {}", r.df)?;
    writeln!(out, "p = {}", format_sci(r.p_one_tailed))?;
    writeln!(
        out,
        "p (baseline > treatment) = {}",
        format_sci(r.p_reversed())
    )?;
    Ok(EXIT_OK)
}
