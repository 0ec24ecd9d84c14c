//! The pattern knowledge base and the heuristic extractor that builds it
//! from labeled requirements.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lexicon::{self, Lexicon};
use crate::model::{ClassLabel, FragmentKind};
use crate::text::TokenizedRequirement;

/// Placeholder for the expectation point inside a pattern.
pub const PLACEHOLDER: &str = "<N>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: &'static str },
    #[error("line {line}: unknown label code `{code}`")]
    UnknownLabelCode { line: usize, code: String },
    #[error("invalid pattern: {0}")]
    InvalidPattern(&'static str),
    #[error("no extractable span in requirement")]
    NoExtractableSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub tokens: Vec<String>,
    pub label: ClassLabel,
    pub source_id: Option<String>,
}

impl Pattern {
    pub fn new(tokens: Vec<String>, label: ClassLabel) -> Result<Self, KbError> {
        if tokens.is_empty() {
            return Err(KbError::InvalidPattern("pattern has no tokens"));
        }
        if tokens.iter().filter(|t| *t == PLACEHOLDER).count() > 1 {
            return Err(KbError::InvalidPattern("more than one placeholder"));
        }
        for tok in &tokens {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(KbError::InvalidPattern("token is empty or contains whitespace"));
            }
            if tok != PLACEHOLDER && tok.chars().any(char::is_uppercase) {
                return Err(KbError::InvalidPattern("token is not lowercase"));
            }
        }
        Ok(Pattern { tokens, label, source_id: None })
    }

    /// Parses whitespace-separated pattern text; `<N>` is accepted in any case.
    pub fn parse(text: &str, label: ClassLabel) -> Result<Self, KbError> {
        let tokens = text
            .split_whitespace()
            .map(|t| if t.eq_ignore_ascii_case(PLACEHOLDER) { String::from(PLACEHOLDER) } else { t.to_lowercase() })
            .collect();
        Pattern::new(tokens, label)
    }

    pub fn with_source(mut self, id: impl Into<String>) -> Self {
        self.source_id = Some(id.into());
        self
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn has_placeholder(&self) -> bool {
        self.tokens.iter().any(|t| t == PLACEHOLDER)
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Patterns plus the negation lexicon used when applying them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PatternKb {
    patterns: Vec<Pattern>,
    negations: Lexicon,
    seen: BTreeSet<(Vec<String>, ClassLabel)>,
}

impl PatternKb {
    pub fn new(negations: Lexicon) -> Self {
        PatternKb { patterns: Vec::new(), negations, seen: BTreeSet::new() }
    }

    pub fn with_default_negations() -> Self {
        Self::new(Lexicon::from_words(lexicon::DEFAULT_NEGATIONS))
    }

    /// Adds a pattern unless the same `(tokens, label)` pair is present;
    /// the first occurrence wins.
    pub fn insert(&mut self, pattern: Pattern) -> bool {
        if self.seen.insert((pattern.tokens.clone(), pattern.label)) {
            self.patterns.push(pattern);
            true
        } else {
            false
        }
    }

    pub fn extend<I: IntoIterator<Item = Pattern>>(&mut self, patterns: I) -> usize {
        patterns.into_iter().filter(|p| self.insert(p.clone())).count()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn negations(&self) -> &Lexicon {
        &self.negations
    }

    pub fn set_negations(&mut self, negations: Lexicon) {
        self.negations = negations;
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Parses `pattern text<TAB>L<TAB>R` lines and adds them.
    pub fn load_tsv(&mut self, text: &str) -> Result<usize, KbError> {
        Ok(self.extend(parse_patterns_tsv(text)?))
    }

    /// Renders the patterns in the `patterns.tsv` format.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.patterns {
            out.push_str(&p.text());
            out.push('\t');
            out.push(p.label.left.code());
            out.push('\t');
            out.push(p.label.right.code());
            out.push('\n');
        }
        out
    }
}

/// Parses the `patterns.tsv` format. Blank lines and lines starting with `#`
/// are skipped. Line numbers in errors are 1-based.
pub fn parse_patterns_tsv(text: &str) -> Result<Vec<Pattern>, KbError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 3 {
            return Err(KbError::Parse { line, message: "expected pattern<TAB>left<TAB>right" });
        }
        let code = |c: &str| {
            FragmentKind::from_code(c.trim()).ok_or_else(|| KbError::UnknownLabelCode { line, code: String::from(c) })
        };
        let label = ClassLabel::new(code(cols[1])?, code(cols[2])?);
        let pattern = Pattern::parse(cols[0], label).map_err(|e| match e {
            KbError::InvalidPattern(message) => KbError::Parse { line, message },
            other => other,
        })?;
        out.push(pattern);
    }
    Ok(out)
}

/// Heuristic pattern extraction from a labeled requirement.
///
/// With a numeric token, the pattern is the run of complement words directly
/// before the earliest number, followed by `<N>`. If no complement word
/// precedes the number the single preceding token is used instead. Without a
/// number, the pattern runs from the last modal (`shall`, `should`, `must`,
/// `be`) to the last non-stopword.
#[derive(Debug, Clone)]
pub struct Extractor {
    complements: Lexicon,
    modals: Lexicon,
    stopwords: Lexicon,
}

impl Default for Extractor {
    fn default() -> Self {
        Extractor {
            complements: Lexicon::from_words(lexicon::DEFAULT_COMPLEMENTS),
            modals: Lexicon::from_words(&["shall", "should", "must", "be"]),
            stopwords: Lexicon::from_words(lexicon::DEFAULT_STOPWORDS),
        }
    }
}

impl Extractor {
    pub fn new(complements: Lexicon) -> Self {
        Extractor { complements, ..Extractor::default() }
    }

    pub fn extract(&self, req: &TokenizedRequirement, label: ClassLabel) -> Result<Pattern, KbError> {
        let tokens = &req.tokens;
        let mut words: Vec<String> = Vec::new();
        if let Some(num) = tokens.iter().position(|t| t.is_number()) {
            let mut start = num;
            while start > 0 && self.complements.contains(&tokens[start - 1].normalized) {
                start -= 1;
            }
            if start == num && num > 0 {
                start = num - 1;
            }
            words.extend(tokens[start..num].iter().map(|t| t.normalized.clone()));
            words.push(String::from(PLACEHOLDER));
        } else {
            let modal = tokens
                .iter()
                .rposition(|t| self.modals.contains(&t.normalized))
                .ok_or(KbError::NoExtractableSpan)?;
            let last = tokens
                .iter()
                .rposition(|t| !self.stopwords.contains(&t.normalized) && t.normalized.chars().any(char::is_alphanumeric))
                .filter(|&last| last > modal)
                .ok_or(KbError::NoExtractableSpan)?;
            words.extend(tokens[modal..=last].iter().map(|t| t.normalized.clone()));
        }
        Pattern::new(words, label).map_err(|_| KbError::NoExtractableSpan)
    }
}

/// [`Extractor::extract`] with the default lexicons.
pub fn extract_pattern(req: &TokenizedRequirement, label: ClassLabel) -> Result<Pattern, KbError> {
    Extractor::default().extract(req, label)
}
