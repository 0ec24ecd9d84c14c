//! The `perfreq` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use perfreq_core::kb::{Extractor, PatternKb};
use perfreq_core::matcher::MatcherConfig;
use perfreq_core::model::MetricDirection;
use perfreq_core::pipeline::{Engine, PipelineError, QuantificationRequest};
use perfreq_core::text::tokenize;
use perfreq_core::VectorStore;

use crate::eval::{self, EvalConfig, TrainSize};
use crate::{bundled, io};

#[derive(Debug, Parser)]
#[command(name = "perfreq", version, about = "Classify and quantify performance requirements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract a pattern from every row of a labeled CSV.
    Extract {
        #[arg(long)]
        labeled: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the best-matching label of each input line as TSV.
    Classify(MatchArgs),
    /// Print the satisfaction function of each input line as JSON.
    Quantify {
        #[command(flatten)]
        matching: MatchArgs,
        /// Metric range as `lo,hi`; defaults to [0, 2 * max expectation].
        #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
        bounds: Option<(f64, f64)>,
        /// `min` or `max`; inferred from the requirement when omitted.
        #[arg(long)]
        direction: Option<MetricDirection>,
        /// Also print K + 1 evenly spaced `(v, g(v))` pairs per function as CSV.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Bootstrap or cross-dataset evaluation.
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        /// Word vectors; the bundled mini vectors when omitted.
        #[arg(long)]
        vectors: Option<PathBuf>,
        #[arg(long)]
        base_patterns: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        runs: usize,
        #[arg(long, conflicts_with = "train_size")]
        train_fraction: Option<f64>,
        #[arg(long)]
        train_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extract from all of --dataset and test on all of this file.
        #[arg(long)]
        test_dataset: Option<PathBuf>,
        /// Write the report TSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Pattern file; the bundled patterns when omitted.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Word vectors; the bundled mini vectors when omitted.
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// One requirement per line; blank lines are skipped.
    #[arg(long)]
    pub input: PathBuf,
    /// Weight of the syntactic score.
    #[arg(long, default_value_t = 0.7)]
    pub w: f64,
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(lo)?, num(hi)?))
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code: 0 on success, 2 on any input failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

type CmdResult = Result<(), String>;

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Extract { labeled, out: target } => run_extract(&labeled, &target, out, err),
        Command::Classify(args) => run_classify(&args, out),
        Command::Quantify { matching, bounds, direction, samples } => {
            run_quantify(&matching, bounds, direction, samples, out, err)
        }
        Command::Eval { dataset, vectors, base_patterns, runs, train_fraction, train_size, seed, test_dataset, out: target, json } => {
            let train = match (train_size, train_fraction) {
                (Some(k), _) => TrainSize::Count(k),
                (None, Some(f)) => TrainSize::Fraction(f),
                (None, None) => TrainSize::Fraction(2.0 / 3.0),
            };
            let cfg = EvalConfig { runs, train, seed, ..EvalConfig::default() };
            let paths = EvalPaths {
                dataset: &dataset,
                vectors: vectors.as_deref(),
                base: base_patterns.as_deref(),
                test: test_dataset.as_deref(),
                out: target.as_deref(),
                json: json.as_deref(),
            };
            run_eval(&paths, &cfg, out)
        }
    }
}

fn io_err(e: std::io::Error) -> String {
    format!("writing output: {e}")
}

fn load_kb(path: Option<&Path>) -> Result<PatternKb, String> {
    match path {
        Some(p) => io::load_patterns(p).map_err(|e| e.to_string()),
        None => Ok(bundled::patterns()),
    }
}

fn load_store(path: Option<&Path>) -> Result<VectorStore, String> {
    match path {
        Some(p) => io::load_vectors(p).map_err(|e| e.to_string()),
        None => Ok(bundled::vectors()),
    }
}

fn input_lines(path: &Path) -> Result<Vec<(usize, String)>, String> {
    let text = io::read_text(path).map_err(|e| e.to_string())?;
    Ok(text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .collect())
}

fn run_extract(labeled: &Path, target: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let rows = io::load_dataset(labeled).map_err(|e| e.to_string())?;
    let extractor = Extractor::new(bundled::complements());
    let mut kb = PatternKb::new(bundled::negations());
    let mut failed = 0;
    for (i, row) in rows.iter().enumerate() {
        let result = tokenize(&row.text).map_err(|e| e.to_string()).and_then(|t| extractor.extract(&t, row.gold).map_err(|e| e.to_string()));
        match result {
            Ok(p) => {
                kb.insert(p.with_source(row.id.clone()));
            }
            Err(e) => {
                failed += 1;
                writeln!(err, "warning: {} row {} ({}): {e}", labeled.display(), i + 1, row.id).map_err(io_err)?;
            }
        }
    }
    io::save_patterns(&kb, target).map_err(|e| e.to_string())?;
    writeln!(out, "extracted {}, failed {failed}, {} distinct patterns", rows.len() - failed, kb.len()).map_err(io_err)
}

fn engine_parts(args: &MatchArgs) -> Result<(PatternKb, VectorStore, MatcherConfig), String> {
    let cfg = MatcherConfig::new(args.w).map_err(|e| format!("--w: {e}"))?;
    Ok((load_kb(args.patterns.as_deref())?, load_store(args.vectors.as_deref())?, cfg))
}

fn run_classify(args: &MatchArgs, out: &mut dyn Write) -> CmdResult {
    let (kb, store, cfg) = engine_parts(args)?;
    let lines = input_lines(&args.input)?;
    let engine = Engine::new(&kb, &store).with_config(cfg).with_directions(bundled::directions());
    let mut buf = String::from("line_no\tleft\tright\tv_beta\tfused\tpattern\n");
    for (line_no, text) in lines {
        let parts = engine.classify(&text).map_err(|e| format!("{} line {line_no}: {e}", args.input.display()))?;
        for part in parts {
            match &part.outcome {
                Some(m) => {
                    let v = m.v_beta.map_or_else(|| "NA".to_string(), |v| v.to_string());
                    let pattern = kb.patterns()[m.pattern_index].text();
                    buf.push_str(&format!(
                        "{line_no}\t{}\t{}\t{v}\t{:.6}\t{pattern}\n",
                        m.label.left, m.label.right, m.fused
                    ));
                }
                None => buf.push_str(&format!("{line_no}\tNA\tNA\tNA\t0.0\t-\n")),
            }
        }
    }
    out.write_all(buf.as_bytes()).map_err(io_err)
}

fn run_quantify(
    args: &MatchArgs,
    bounds: Option<(f64, f64)>,
    direction: Option<MetricDirection>,
    samples: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let (kb, store, cfg) = engine_parts(args)?;
    if let Some((lo, hi)) = bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("--bounds: need finite lo < hi, got {lo},{hi}"));
        }
    }
    let lines = input_lines(&args.input)?;
    let engine = Engine::new(&kb, &store).with_config(cfg).with_directions(bundled::directions());
    let mut csv = String::from("line_no,v,g\n");
    for (line_no, text) in lines {
        let mut req = QuantificationRequest::new(text);
        if let Some((lo, hi)) = bounds {
            req = req.with_bounds(lo, hi);
        }
        if let Some(d) = direction {
            req = req.with_direction(d);
        }
        match engine.quantify(&req) {
            Ok(result) => {
                for w in &result.warnings {
                    writeln!(err, "warning: line {line_no}: {w}").map_err(io_err)?;
                }
                let json = serde_json::to_string(&result.function).map_err(|e| e.to_string())?;
                writeln!(out, "{json}").map_err(io_err)?;
                for (v, g) in result.function.sample(samples) {
                    csv.push_str(&format!("{line_no},{v},{g}\n"));
                }
            }
            Err(e @ (PipelineError::Text(_) | PipelineError::NoMatch | PipelineError::Model(_) | PipelineError::Match(_))) => {
                writeln!(err, "warning: line {line_no}: {e}").map_err(io_err)?;
                writeln!(out, "null").map_err(io_err)?;
            }
            Err(e) => return Err(format!("{} line {line_no}: {e}", args.input.display())),
        }
    }
    if samples > 0 {
        out.write_all(csv.as_bytes()).map_err(io_err)?;
    }
    Ok(())
}

struct EvalPaths<'p> {
    dataset: &'p Path,
    vectors: Option<&'p Path>,
    base: Option<&'p Path>,
    test: Option<&'p Path>,
    out: Option<&'p Path>,
    json: Option<&'p Path>,
}

fn run_eval(paths: &EvalPaths<'_>, cfg: &EvalConfig, out: &mut dyn Write) -> CmdResult {
    let dataset = io::load_dataset(paths.dataset).map_err(|e| e.to_string())?;
    let store = load_store(paths.vectors)?;
    let base = match paths.base {
        Some(p) => io::load_patterns(p).map_err(|e| e.to_string())?,
        None => PatternKb::new(bundled::negations()),
    };
    let cfg = EvalConfig { extractor: Extractor::new(bundled::complements()), ..cfg.clone() };
    let report = match paths.test {
        Some(t) => {
            let target = io::load_dataset(t).map_err(|e| e.to_string())?;
            eval::cross_dataset_eval(&dataset, &target, &base, &store, &cfg)
        }
        None => eval::bootstrap_eval(&dataset, &base, &store, &cfg),
    }
    .map_err(|e| format!("{}: {e}", paths.dataset.display()))?;
    let tsv = report.to_tsv();
    if let Some(p) = paths.json {
        io::write_atomic(p, report.to_json().as_bytes()).map_err(|e| e.to_string())?;
    }
    match paths.out {
        Some(p) => io::write_atomic(p, tsv.as_bytes()).map_err(|e| e.to_string()),
        None => out.write_all(tsv.as_bytes()).map_err(io_err),
    }
}
