//! Structure matching between a requirement and the pattern knowledge base.
//!
//! Each pattern is aligned with the requirement through a longest common
//! subsequence (LCS) of tokens, where `<N>` matches any numeric token. The
//! alignment is scored twice:
//!
//! * syntactically, as pattern coverage `l_lcs / l_k` penalized by how spread
//!   out the match is in the requirement: `syn = raw * l_lcs / max(l_lcs, span)`,
//!   where articles the match skips over do not count toward the span;
//! * semantically, as the cosine between the averaged word vectors of the
//!   pattern and of the matched requirement tokens.
//!
//! The pattern maximizing `w * syn + (1 - w) * (sem + 1) / 2` wins. Its label is
//! reversed (`S <-> G`) when the requirement holds a negation word outside the
//! match.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::embeddings::{cosine, VectorStore};
use crate::kb::{Pattern, PatternKb, PLACEHOLDER};
use crate::lexicon::Lexicon;
use crate::model::ClassLabel;
use crate::text::{Token, TokenizedRequirement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("the pattern knowledge base is empty")]
    EmptyKb,
    #[error("syntax weight {0} outside [0, 1]")]
    InvalidWeight(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcsResult {
    /// Requirement positions of the matched tokens.
    pub positions: Vec<usize>,
    /// Pattern positions aligned with `positions`.
    pub pattern_positions: Vec<usize>,
    pub length: usize,
    pub first_index: usize,
    pub last_index: usize,
    /// Window width `i_last - i_first + 1`, not counting unmatched articles.
    pub span: usize,
    pub v_beta: Option<f64>,
}

impl LcsResult {
    fn empty() -> Self {
        LcsResult {
            positions: Vec::new(),
            pattern_positions: Vec::new(),
            length: 0,
            first_index: 0,
            last_index: 0,
            span: 0,
            v_beta: None,
        }
    }

    /// 0 for an empty match.
    pub fn span(&self) -> usize {
        self.span
    }

    /// Requirement-side normalized tokens of the match.
    pub fn matched_tokens<'r>(&self, req: &'r [Token]) -> Vec<&'r str> {
        self.positions.iter().map(|&j| req[j].normalized.as_str()).collect()
    }
}

/// Articles skipped over by a match do not widen its span.
pub const GAP_FREE: [&str; 3] = ["a", "an", "the"];

/// `i_last - i_first + 1` minus the unmatched articles inside the window.
#[inline]
pub fn effective_span(req: &[Token], positions: &[usize]) -> usize {
    let (Some(&first), Some(&last)) = (positions.first(), positions.last()) else {
        return 0;
    };
    let skipped_articles = (first..=last)
        .filter(|j| !positions.contains(j) && GAP_FREE.contains(&req[*j].normalized.as_str()))
        .count();
    last - first + 1 - skipped_articles
}

#[inline]
pub fn token_matches(pattern_token: &str, token: &Token) -> bool {
    if pattern_token == PLACEHOLDER {
        token.is_number()
    } else {
        pattern_token == token.normalized
    }
}

/// Best `(length, start)` of common subsequences ending at a cell, packed so
/// that the larger length wins, then the later start (shorter span for a
/// fixed end).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
struct Chain(u64);

impl Chain {
    #[inline]
    fn new(len: usize, start: usize) -> Self {
        Chain(((len as u64) << 32) | start as u64)
    }

    #[inline]
    fn len(self) -> usize {
        (self.0 >> 32) as usize
    }

    #[inline]
    fn start(self) -> usize {
        (self.0 & 0xffff_ffff) as usize
    }
}

/// LCS over pattern and requirement tokens.
///
/// Among equally long alignments the one with the narrowest requirement window
/// wins, then the earliest start, then the lexicographically smallest
/// requirement positions, then the smallest pattern positions.
pub fn lcs_tokens<S: AsRef<str>>(pattern: &[S], req: &[Token]) -> LcsResult {
    let (m, n) = (pattern.len(), req.len());
    if m == 0 || n == 0 {
        return LcsResult::empty();
    }
    let matches = |i: usize, j: usize| token_matches(pattern[i].as_ref(), &req[j]);

    // Rows 0..=m: best chain over pattern[..i] x req[..j].
    // Row m + 1: best chain whose last match is req[j - 1].
    let width = n + 1;
    let ending = (m + 1) * width;
    let mut table = vec![Chain::default(); (m + 2) * width];
    for i in 1..=m {
        for j in 1..=n {
            let mut cell = table[(i - 1) * width + j].max(table[i * width + j - 1]);
            if matches(i - 1, j - 1) {
                let prev = table[(i - 1) * width + j - 1];
                let chain = Chain::new(prev.len() + 1, if prev.len() == 0 { j - 1 } else { prev.start() });
                table[ending + j] = table[ending + j].max(chain);
                cell = cell.max(chain);
            }
            table[i * width + j] = cell;
        }
    }
    let length = table[m * width + n].len();
    if length == 0 {
        return LcsResult::empty();
    }

    // Narrowest window, then earliest start.
    let (start, end) = (1..=n)
        .filter(|&j| table[ending + j].len() == length)
        .map(|j| (table[ending + j].start(), j - 1))
        .min_by(|a, b| (a.1 - a.0).cmp(&(b.1 - b.0)).then(a.0.cmp(&b.0)))
        .expect("an alignment of maximal length ends somewhere");

    // The table is reused for suffix[i][q]: LCS of pattern[i..] and
    // req[start + q..=end].
    let w = end - start + 2;
    let suffix = &mut table[..(m + 1) * w];
    suffix.fill(Chain::default());
    for i in (0..m).rev() {
        for q in (0..w - 1).rev() {
            let j = start + q;
            suffix[i * w + q] = if matches(i, j) {
                Chain(1 + suffix[(i + 1) * w + q + 1].0)
            } else {
                suffix[(i + 1) * w + q].max(suffix[i * w + q + 1])
            };
        }
    }
    let suffix = &table;

    let mut positions = Vec::with_capacity(length);
    let mut pattern_positions = Vec::with_capacity(length);
    let (mut p, mut q, mut remaining) = (0, 0, length);
    while remaining > 0 {
        let pick = (q..w - 1).find_map(|qq| {
            (p..m).find(|&ii| matches(ii, start + qq) && 1 + suffix[(ii + 1) * w + qq + 1].0 as usize >= remaining).map(|ii| (ii, qq))
        });
        let (ii, qq) = pick.expect("greedy reconstruction stays feasible");
        positions.push(start + qq);
        pattern_positions.push(ii);
        p = ii + 1;
        q = qq + 1;
        remaining -= 1;
    }

    let v_beta = pattern_positions
        .iter()
        .zip(&positions)
        .find(|(pi, _)| pattern[**pi].as_ref() == PLACEHOLDER)
        .and_then(|(_, ri)| req[*ri].numeric_value);
    LcsResult {
        first_index: positions[0],
        last_index: positions[length - 1],
        span: effective_span(req, &positions),
        positions,
        pattern_positions,
        length,
        v_beta,
    }
}

pub fn lcs(pattern: &Pattern, req: &TokenizedRequirement) -> LcsResult {
    lcs_tokens(&pattern.tokens, &req.tokens)
}

/// `(raw, penalized)` syntactic scores for an alignment against a pattern of
/// `pattern_len` tokens.
pub fn syntactic_score(pattern_len: usize, lcs: &LcsResult) -> (f64, f64) {
    if lcs.length == 0 || pattern_len == 0 {
        return (0.0, 0.0);
    }
    let l = lcs.length as f64;
    let raw = l / pattern_len as f64;
    let penalized = raw * l / l.max(lcs.span() as f64);
    (raw, penalized)
}

/// Cosine between the averaged vectors of the pattern and of its matched
/// requirement tokens; 0 for an empty match.
pub fn semantic_score(store: &VectorStore, pattern: &Pattern, req: &TokenizedRequirement, lcs: &LcsResult) -> f64 {
    if lcs.length == 0 {
        return 0.0;
    }
    let pv = store.sentence_vector(&pattern.tokens);
    let lv = store.sentence_vector(&lcs.matched_tokens(&req.tokens));
    cosine(&pv, &lv).unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatcherConfig {
    w: f64,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig { w: 0.7 }
    }
}

impl MatcherConfig {
    pub fn new(w: f64) -> Result<Self, MatchError> {
        if (0.0..=1.0).contains(&w) {
            Ok(MatcherConfig { w })
        } else {
            Err(MatchError::InvalidWeight(alloc::format!("{w}")))
        }
    }

    pub fn weight(&self) -> f64 {
        self.w
    }

    pub fn fuse(&self, syn: f64, sem: f64) -> f64 {
        (self.w * syn + (1.0 - self.w) * (sem + 1.0) / 2.0).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub pattern_index: usize,
    pub lcs: LcsResult,
    pub syn_raw: f64,
    pub syn: f64,
    pub sem: f64,
    pub fused: f64,
    /// Label after negation reversal.
    pub label: ClassLabel,
    pub v_beta: Option<f64>,
    pub negated: bool,
}

/// Scores one pattern against a requirement, without negation handling.
pub fn score_pattern(
    index: usize,
    pattern: &Pattern,
    store: &VectorStore,
    req: &TokenizedRequirement,
    cfg: &MatcherConfig,
) -> MatchResult {
    let lcs = lcs(pattern, req);
    let (syn_raw, syn) = syntactic_score(pattern.len(), &lcs);
    let sem = semantic_score(store, pattern, req, &lcs);
    MatchResult {
        pattern_index: index,
        v_beta: lcs.v_beta,
        lcs,
        syn_raw,
        syn,
        sem,
        fused: cfg.fuse(syn, sem),
        label: pattern.label,
        negated: false,
    }
}

/// Higher fused score, then higher syntactic score, then the shorter
/// pattern, then the lower index.
fn rank(a: &MatchResult, a_len: usize, b: &MatchResult, b_len: usize) -> Ordering {
    b.fused
        .total_cmp(&a.fused)
        .then(b.syn.total_cmp(&a.syn))
        .then(a_len.cmp(&b_len))
        .then(a.pattern_index.cmp(&b.pattern_index))
}

/// Every pattern's score, best first. Patterns without any common token are
/// left out.
pub fn rank_patterns(
    kb: &PatternKb,
    store: &VectorStore,
    req: &TokenizedRequirement,
    cfg: &MatcherConfig,
) -> Vec<MatchResult> {
    let pats = kb.patterns();
    let mut scored: Vec<MatchResult> = pats
        .iter()
        .enumerate()
        .map(|(i, p)| score_pattern(i, p, store, req, cfg))
        .filter(|r| r.lcs.length > 0)
        .collect();
    scored.sort_by(|a, b| rank(a, pats[a.pattern_index].len(), b, pats[b.pattern_index].len()));
    scored
}

/// The best-matching pattern with its label after negation reversal.
/// `Ok(None)` means no pattern shares a single token with the requirement.
pub fn select(
    kb: &PatternKb,
    store: &VectorStore,
    req: &TokenizedRequirement,
    cfg: &MatcherConfig,
) -> Result<Option<MatchResult>, MatchError> {
    if kb.is_empty() {
        return Err(MatchError::EmptyKb);
    }
    let pats = kb.patterns();
    let mut best: Option<MatchResult> = None;
    for (i, p) in pats.iter().enumerate() {
        let r = score_pattern(i, p, store, req, cfg);
        if r.lcs.length == 0 {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => rank(&r, p.len(), b, pats[b.pattern_index].len()) == Ordering::Less,
        };
        if better {
            best = Some(r);
        }
    }
    Ok(best.map(|mut r| {
        let (label, negated) = apply_negation(kb.negations(), req, &r.lcs, r.label);
        r.label = label;
        r.negated = negated;
        r
    }))
}

/// Reverses `S <-> G` when a negation word occurs outside the match.
/// Returns the label and whether it was reversed.
pub fn apply_negation(
    negations: &Lexicon,
    req: &TokenizedRequirement,
    lcs: &LcsResult,
    label: ClassLabel,
) -> (ClassLabel, bool) {
    let negated = req
        .tokens
        .iter()
        .any(|t| negations.contains(&t.normalized) && !lcs.positions.contains(&t.position));
    if negated {
        (label.reversed(), true)
    } else {
        (label, false)
    }
}
