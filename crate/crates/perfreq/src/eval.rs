//! Bootstrap and cross-dataset evaluation of the classifier.

use perfreq_core::kb::{Extractor, PatternKb};
use perfreq_core::matcher::MatcherConfig;
use perfreq_core::metrics::{weighted_metrics, MetricsError, MetricsReport};
use perfreq_core::model::ClassLabel;
use perfreq_core::pipeline::{Engine, PipelineError};
use perfreq_core::text::tokenize;
use perfreq_core::VectorStore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::LabeledRequirement;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("dataset too small: {train} training and {test} test requirements")]
    DatasetTooSmall { train: usize, test: usize },
    #[error("runs must be at least 1")]
    NoRuns,
    #[error("train fraction {0} is not inside (0, 1)")]
    InvalidFraction(f64),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("requirement {id}: {source}")]
    Requirement { id: String, source: PipelineError },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainSize {
    /// `floor(fraction * n)` requirements.
    Fraction(f64),
    Count(usize),
}

impl TrainSize {
    pub fn resolve(self, n: usize) -> Result<usize, EvalError> {
        match self {
            TrainSize::Fraction(f) if f > 0.0 && f < 1.0 => Ok((f * n as f64).floor() as usize),
            TrainSize::Fraction(f) => Err(EvalError::InvalidFraction(f)),
            TrainSize::Count(k) => Ok(k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub runs: usize,
    pub train: TrainSize,
    pub seed: u64,
    pub matcher: MatcherConfig,
    pub extractor: Extractor,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            runs: 30,
            train: TrainSize::Fraction(2.0 / 3.0),
            seed: 0,
            matcher: MatcherConfig::default(),
            extractor: Extractor::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub run: usize,
    /// Indices into the dataset, ascending.
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub patterns: usize,
    pub extraction_failures: usize,
    pub w_precision: f64,
    pub w_recall: f64,
    pub w_f1: f64,
    pub n_eval: usize,
    pub n_nomatch: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

impl MeanSd {
    /// Sample standard deviation; 0 for a single value.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        MeanSd { mean, sd }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub w_precision: MeanSd,
    pub w_recall: MeanSd,
    pub w_f1: MeanSd,
    pub n_nomatch: MeanSd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub runs: Vec<RunReport>,
    pub summary: Summary,
}

impl EvalReport {
    fn new(runs: Vec<RunReport>) -> Self {
        let col = |f: fn(&RunReport) -> f64| MeanSd::of(&runs.iter().map(f).collect::<Vec<_>>());
        let summary = Summary {
            w_precision: col(|r| r.w_precision),
            w_recall: col(|r| r.w_recall),
            w_f1: col(|r| r.w_f1),
            n_nomatch: col(|r| r.n_nomatch as f64),
        };
        EvalReport { runs, summary }
    }

    /// `run wP wR wF1 n_nomatch` rows followed by a `mean±sd` line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("run\twP\twR\twF1\tn_nomatch\n");
        for r in &self.runs {
            out.push_str(&format!(
                "{}\t{:.4}\t{:.4}\t{:.4}\t{}\n",
                r.run, r.w_precision, r.w_recall, r.w_f1, r.n_nomatch
            ));
        }
        let s = &self.summary;
        let pm = |m: MeanSd| format!("{:.4}±{:.4}", m.mean, m.sd);
        out.push_str(&format!(
            "mean±sd\t{}\t{}\t{}\t{}\n",
            pm(s.w_precision),
            pm(s.w_recall),
            pm(s.w_f1),
            pm(s.n_nomatch)
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Training/test index partition for one run, both sorted.
pub fn partition(n: usize, train_size: usize, seed: u64, run: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    let mut train = rand::seq::index::sample(&mut rng, n, train_size.min(n)).into_vec();
    train.sort_unstable();
    let mut in_train = vec![false; n];
    train.iter().for_each(|&i| in_train[i] = true);
    let test = (0..n).filter(|&i| !in_train[i]).collect();
    (train, test)
}

/// Extends a copy of `base` with patterns extracted from `train`; returns the
/// number of requirements nothing could be extracted from.
pub fn build_kb<'r>(
    base: &PatternKb,
    train: impl IntoIterator<Item = &'r LabeledRequirement>,
    extractor: &Extractor,
) -> (PatternKb, usize) {
    let mut kb = base.clone();
    let mut failures = 0;
    for req in train {
        match tokenize(&req.text).map_err(|_| ()).and_then(|t| extractor.extract(&t, req.gold).map_err(|_| ())) {
            Ok(p) => {
                kb.insert(p.with_source(req.id.clone()));
            }
            Err(()) => failures += 1,
        }
    }
    (kb, failures)
}

/// The label of the requirement part with the highest fused score, or `None`
/// when no part matched.
pub fn predict(engine: &Engine<'_>, text: &str) -> Result<Option<ClassLabel>, PipelineError> {
    let parts = engine.classify(text)?;
    let mut best: Option<(f64, ClassLabel)> = None;
    for m in parts.iter().filter_map(|p| p.outcome.as_ref()) {
        if best.is_none_or(|(f, _)| m.fused > f) {
            best = Some((m.fused, m.label));
        }
    }
    Ok(best.map(|b| b.1))
}

pub fn evaluate<'r>(
    kb: &PatternKb,
    store: &VectorStore,
    matcher: MatcherConfig,
    test: impl IntoIterator<Item = &'r LabeledRequirement>,
) -> Result<MetricsReport, EvalError> {
    let engine = Engine::new(kb, store).with_config(matcher);
    let (mut golds, mut preds) = (Vec::new(), Vec::new());
    for req in test {
        let pred = predict(&engine, &req.text).map_err(|source| EvalError::Requirement { id: req.id.clone(), source })?;
        golds.push(req.gold);
        preds.push(pred);
    }
    Ok(weighted_metrics(&golds, &preds)?)
}

fn run_report(run: usize, train: Vec<usize>, test: Vec<usize>, kb: &PatternKb, failures: usize, m: &MetricsReport) -> RunReport {
    RunReport {
        run,
        train,
        test,
        patterns: kb.len(),
        extraction_failures: failures,
        w_precision: m.weighted_precision,
        w_recall: m.weighted_recall,
        w_f1: m.weighted_f1,
        n_eval: m.n_eval,
        n_nomatch: m.n_nomatch,
    }
}

/// Repeated random train/test splits without replacement. Run `r` draws from
/// the ChaCha8 stream `r` of `seed`, so runs are independent of each other.
pub fn bootstrap_eval(
    dataset: &[LabeledRequirement],
    base: &PatternKb,
    store: &VectorStore,
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    if cfg.runs == 0 {
        return Err(EvalError::NoRuns);
    }
    let n = dataset.len();
    let train_size = cfg.train.resolve(n)?;
    if train_size == 0 || train_size >= n {
        return Err(EvalError::DatasetTooSmall { train: train_size.min(n), test: n.saturating_sub(train_size) });
    }
    let mut runs = Vec::with_capacity(cfg.runs);
    for run in 1..=cfg.runs {
        let (train, test) = partition(n, train_size, cfg.seed, run);
        let (kb, failures) = build_kb(base, train.iter().map(|&i| &dataset[i]), &cfg.extractor);
        let m = evaluate(&kb, store, cfg.matcher, test.iter().map(|&i| &dataset[i]))?;
        runs.push(run_report(run, train, test, &kb, failures, &m));
    }
    Ok(EvalReport::new(runs))
}

/// Extracts patterns from all of `source` and tests on all of `target`.
pub fn cross_dataset_eval(
    source: &[LabeledRequirement],
    target: &[LabeledRequirement],
    base: &PatternKb,
    store: &VectorStore,
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    if source.is_empty() || target.is_empty() {
        return Err(EvalError::DatasetTooSmall { train: source.len(), test: target.len() });
    }
    let (kb, failures) = build_kb(base, source, &cfg.extractor);
    let m = evaluate(&kb, store, cfg.matcher, target)?;
    let run = run_report(1, (0..source.len()).collect(), (0..target.len()).collect(), &kb, failures, &m);
    Ok(EvalReport::new(vec![run]))
}
