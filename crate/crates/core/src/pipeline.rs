//! Text to satisfaction function: split, match, classify, quantify.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::embeddings::VectorStore;
use crate::kb::PatternKb;
use crate::matcher::{select, MatchError, MatchResult, MatcherConfig};
use crate::model::{self, ClassLabel, CombinePart, MetricDirection, ModelError, SatisfactionFunction};
use crate::text::{tokenize, Splitter, TextError, TokenizedRequirement};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no pattern matched the requirement")]
    NoMatch,
    #[error("line {line}: {message}")]
    DirectionFile { line: usize, message: &'static str },
}

/// Words hinting at whether a metric is minimized or maximized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionLexicon {
    words: BTreeMap<String, MetricDirection>,
}

const DEFAULT_DIRECTION_WORDS: &[(&str, MetricDirection)] = &[
    ("time", MetricDirection::Minimize),
    ("latency", MetricDirection::Minimize),
    ("response", MetricDirection::Minimize),
    ("seconds", MetricDirection::Minimize),
    ("ms", MetricDirection::Minimize),
    ("users", MetricDirection::Maximize),
    ("throughput", MetricDirection::Maximize),
    ("requests", MetricDirection::Maximize),
    ("transactions", MetricDirection::Maximize),
];

impl Default for DirectionLexicon {
    fn default() -> Self {
        DirectionLexicon { words: DEFAULT_DIRECTION_WORDS.iter().map(|(w, d)| (String::from(*w), *d)).collect() }
    }
}

impl DirectionLexicon {
    /// Parses `word<TAB>min|max` lines; `#` comments and blank lines skipped.
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut words = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, dir) = line
                .split_once('\t')
                .ok_or(PipelineError::DirectionFile { line: i + 1, message: "expected word<TAB>min|max" })?;
            let dir = dir
                .parse()
                .map_err(|_| PipelineError::DirectionFile { line: i + 1, message: "direction must be min or max" })?;
            words.insert(word.trim().to_lowercase(), dir);
        }
        Ok(DirectionLexicon { words })
    }

    pub fn get(&self, word: &str) -> Option<MetricDirection> {
        self.words.get(word).copied()
    }

    /// Majority vote over the tokens; ties go to the earliest hint. `None`
    /// when no token is a hint.
    pub fn infer(&self, req: &TokenizedRequirement) -> Option<MetricDirection> {
        let hints: Vec<MetricDirection> = req.tokens.iter().filter_map(|t| self.get(&t.normalized)).collect();
        let first = *hints.first()?;
        let max = hints.iter().filter(|d| **d == MetricDirection::Maximize).count();
        let min = hints.len() - max;
        Some(match max.cmp(&min) {
            core::cmp::Ordering::Greater => MetricDirection::Maximize,
            core::cmp::Ordering::Less => MetricDirection::Minimize,
            core::cmp::Ordering::Equal => first,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantificationRequest {
    pub text: String,
    pub bounds: Option<(f64, f64)>,
    pub direction: Option<MetricDirection>,
}

impl QuantificationRequest {
    pub fn new(text: impl Into<String>) -> Self {
        QuantificationRequest { text: text.into(), bounds: None, direction: None }
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Self {
        self.bounds = Some((lo, hi));
        self
    }

    pub fn with_direction(mut self, direction: MetricDirection) -> Self {
        self.direction = Some(direction);
        self
    }
}

/// One split part of a requirement and its best match, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedPart {
    pub requirement: TokenizedRequirement,
    pub outcome: Option<MatchResult>,
}

impl ClassifiedPart {
    pub fn text(&self) -> &str {
        &self.requirement.raw
    }

    pub fn label(&self) -> Option<ClassLabel> {
        self.outcome.as_ref().map(|m| m.label)
    }

    pub fn v_beta(&self) -> Option<f64> {
        self.outcome.as_ref().and_then(|m| m.v_beta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantifiedPart {
    pub text: String,
    pub label: ClassLabel,
    pub v_beta: Option<f64>,
    pub fused: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantificationResult {
    pub parts: Vec<QuantifiedPart>,
    pub function: SatisfactionFunction,
    pub direction: MetricDirection,
    pub bounds: (f64, f64),
    pub warnings: Vec<String>,
}

/// A loaded knowledge base and vector store with the lexicons that drive
/// splitting and direction inference.
#[derive(Debug, Clone)]
pub struct Engine<'a> {
    kb: &'a PatternKb,
    store: &'a VectorStore,
    cfg: MatcherConfig,
    splitter: Splitter,
    directions: DirectionLexicon,
}

impl<'a> Engine<'a> {
    pub fn new(kb: &'a PatternKb, store: &'a VectorStore) -> Self {
        Engine {
            kb,
            store,
            cfg: MatcherConfig::default(),
            splitter: Splitter::default(),
            directions: DirectionLexicon::default(),
        }
    }

    pub fn with_config(mut self, cfg: MatcherConfig) -> Self {
        self.cfg = cfg;
        self
    }

    pub fn with_splitter(mut self, splitter: Splitter) -> Self {
        self.splitter = splitter;
        self
    }

    pub fn with_directions(mut self, directions: DirectionLexicon) -> Self {
        self.directions = directions;
        self
    }

    pub fn kb(&self) -> &PatternKb {
        self.kb
    }

    /// Tokenizes, splits and matches each part.
    pub fn classify(&self, text: &str) -> Result<Vec<ClassifiedPart>, PipelineError> {
        let req = tokenize(text)?;
        self.classify_tokens(&req)
    }

    pub fn classify_tokens(&self, req: &TokenizedRequirement) -> Result<Vec<ClassifiedPart>, PipelineError> {
        self.splitter
            .split(req)
            .into_iter()
            .map(|part| {
                let outcome = select(self.kb, self.store, &part, &self.cfg)?;
                Ok(ClassifiedPart { requirement: part, outcome })
            })
            .collect()
    }

    /// Classifies and compiles the requirement into `g(v)`.
    pub fn quantify(&self, request: &QuantificationRequest) -> Result<QuantificationResult, PipelineError> {
        let req = tokenize(&request.text)?;
        let classified = self.classify_tokens(&req)?;
        let mut warnings = Vec::new();

        let mut matched: Vec<(&ClassifiedPart, &MatchResult)> = Vec::new();
        for part in &classified {
            match &part.outcome {
                Some(m) => matched.push((part, m)),
                None => warnings.push(format!("no pattern matched: {}", part.text())),
            }
        }
        if matched.is_empty() {
            return Err(PipelineError::NoMatch);
        }

        let (direction, part_directions) = match request.direction {
            Some(d) => (d, None),
            None => {
                let per_part: Vec<Option<MetricDirection>> =
                    matched.iter().map(|(p, _)| self.directions.infer(&p.requirement)).collect();
                let d = per_part.iter().flatten().next().copied().unwrap_or_else(|| {
                    warnings.push(String::from("metric direction unknown, assuming min"));
                    MetricDirection::Minimize
                });
                (d, Some(per_part))
            }
        };

        let mut with_expectation: Vec<(usize, &ClassifiedPart, &MatchResult, f64)> = Vec::new();
        let mut unbounded: Vec<(&ClassifiedPart, &MatchResult)> = Vec::new();
        for (i, (part, m)) in matched.iter().enumerate() {
            match m.v_beta {
                Some(v) => with_expectation.push((i, part, m, v)),
                None if m.label.is_symmetric() => unbounded.push((part, m)),
                None => warnings.push(format!("label {} needs an expectation point: {}", m.label, part.text())),
            }
        }

        let (function, bounds, used) = if !with_expectation.is_empty() {
            for (part, _) in &unbounded {
                warnings.push(format!("ignoring part without expectation point: {}", part.text()));
            }
            let v_betas: Vec<f64> = with_expectation.iter().map(|e| e.3).collect();
            let bounds = request.bounds.unwrap_or_else(|| model::default_bounds(&v_betas));
            let parts: Vec<CombinePart> = with_expectation
                .iter()
                .map(|(i, _, m, v)| CombinePart {
                    label: m.label,
                    v_beta: *v,
                    direction: part_directions.as_ref().and_then(|d| d[*i]),
                })
                .collect();
            let f = model::combine(&parts, bounds, direction)?;
            let used: Vec<QuantifiedPart> = with_expectation
                .iter()
                .map(|(_, p, m, v)| QuantifiedPart {
                    text: String::from(p.text()),
                    label: m.label,
                    v_beta: Some(*v),
                    fused: m.fused,
                })
                .collect();
            (f, bounds, used)
        } else if let Some((part, m)) = unbounded.first() {
            for (extra, _) in unbounded.iter().skip(1) {
                warnings.push(format!("ignoring additional part: {}", extra.text()));
            }
            let bounds = request.bounds.unwrap_or_else(|| model::default_bounds(&[]));
            let f = model::compile_single(m.label, None, bounds, direction)?;
            let used = alloc::vec![QuantifiedPart {
                text: String::from(part.text()),
                label: m.label,
                v_beta: None,
                fused: m.fused
            }];
            (f, bounds, used)
        } else {
            let label = matched[0].1.label;
            return Err(PipelineError::Model(ModelError::MissingExpectation(label)));
        };

        Ok(QuantificationResult { parts: used, function, direction, bounds, warnings })
    }
}
