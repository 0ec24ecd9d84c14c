//! Tokenization and splitting of requirements with several expectation
//! points.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lexicon::{self, Lexicon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("requirement text is empty")]
    EmptyInput,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub surface: String,
    /// Lowercased surface without leading or trailing punctuation. A token made
    /// only of punctuation keeps its surface.
    pub normalized: String,
    pub numeric_value: Option<f64>,
    pub position: usize,
}

impl Token {
    pub fn new(surface: &str, position: usize) -> Self {
        let stripped = strip_punctuation(surface);
        let normalized = if stripped.is_empty() { surface.to_lowercase() } else { stripped.to_lowercase() };
        let numeric_value = parse_number(&normalized);
        Token { surface: String::from(surface), normalized, numeric_value, position }
    }

    #[inline]
    pub fn is_number(&self) -> bool {
        self.numeric_value.is_some()
    }

    fn trailing_punctuation(&self) -> &str {
        let keep = self.surface.trim_end_matches(|c: char| !c.is_alphanumeric()).len();
        &self.surface[keep..]
    }
}

fn strip_punctuation(s: &str) -> &str {
    s.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Parses `15`, `2.5` and `1,000` style numbers. Thousands separators must
/// group exactly three digits.
pub fn parse_number(s: &str) -> Option<f64> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s, None),
    };
    if int_part.is_empty() {
        return None;
    }
    if let Some(frac) = frac_part {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
    }
    let mut digits = String::with_capacity(s.len());
    if int_part.contains(',') {
        let mut groups = int_part.split(',');
        let head = groups.next()?;
        if head.is_empty() || head.len() > 3 || !head.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.push_str(head);
        for group in groups {
            if group.len() != 3 || !group.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.push_str(group);
        }
    } else {
        if !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.push_str(int_part);
    }
    if let Some(frac) = frac_part {
        digits.push('.');
        digits.push_str(frac);
    }
    digits.parse().ok()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenizedRequirement {
    pub raw: String,
    pub tokens: Vec<Token>,
}

impl TokenizedRequirement {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn normalized(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.normalized.as_str()).collect()
    }

    pub fn numeric_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_number()).count()
    }

    /// Surfaces joined by single spaces.
    pub fn detokenize(&self) -> String {
        join_surfaces(&self.tokens)
    }
}

fn join_surfaces(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, tok) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&tok.surface);
    }
    out
}

pub fn tokenize(text: &str) -> Result<TokenizedRequirement, TextError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(TextError::EmptyInput);
    }
    let tokens = trimmed.split_whitespace().enumerate().map(|(i, s)| Token::new(s, i)).collect();
    Ok(TokenizedRequirement { raw: String::from(trimmed), tokens })
}

/// Splits requirements carrying several expectation points into parts with
/// one each.
#[derive(Debug, Clone)]
pub struct Splitter {
    connectives: Lexicon,
    modals: Lexicon,
}

impl Default for Splitter {
    fn default() -> Self {
        Splitter {
            connectives: Lexicon::from_words(lexicon::DEFAULT_CONNECTIVES),
            modals: Lexicon::from_words(lexicon::DEFAULT_MODALS),
        }
    }
}

impl Splitter {
    pub fn new(connectives: Lexicon, modals: Lexicon) -> Self {
        Splitter { connectives, modals }
    }

    fn is_word_connective(&self, tok: &Token) -> bool {
        self.connectives.contains(&tok.normalized)
    }

    fn ends_with_connective(&self, tok: &Token) -> bool {
        let trailing = tok.trailing_punctuation();
        trailing.chars().any(|c| {
            let mut buf = [0u8; 4];
            self.connectives.contains(c.encode_utf8(&mut buf))
        })
    }

    /// Returns `(part_end, next_start)` for a connective between two numbers.
    fn find_cut(&self, tokens: &[Token], from: usize, to: usize) -> Option<(usize, usize)> {
        for t in from..to {
            if t > from && self.is_word_connective(&tokens[t]) {
                return Some((t, t + 1));
            }
            if t + 1 < to && self.ends_with_connective(&tokens[t]) {
                let next = if self.is_word_connective(&tokens[t + 1]) { t + 2 } else { t + 1 };
                return Some((t + 1, next));
            }
        }
        None
    }

    /// End (exclusive) of the subject prefix copied onto later parts: the
    /// first modal plus the verb following it, or the first three tokens when
    /// there is no modal. Never reaches the first numeric token.
    fn prefix_end(&self, tokens: &[Token], first_number: usize) -> usize {
        let end = tokens[..first_number]
            .iter()
            .position(|t| self.modals.contains(&t.normalized))
            .map_or(3, |m| m + 2);
        end.min(first_number)
    }

    pub fn split(&self, req: &TokenizedRequirement) -> Vec<TokenizedRequirement> {
        let numbers: Vec<usize> = req.tokens.iter().filter(|t| t.is_number()).map(|t| t.position).collect();
        if numbers.len() < 2 {
            return alloc::vec![req.clone()];
        }
        let tokens = &req.tokens;
        let mut ranges: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for pair in numbers.windows(2) {
            if let Some((end, next)) = self.find_cut(tokens, pair[0], pair[1]) {
                ranges.push((start, end));
                start = next;
            }
        }
        if ranges.is_empty() {
            return alloc::vec![req.clone()];
        }
        ranges.push((start, tokens.len()));

        let prefix = &tokens[..self.prefix_end(tokens, numbers[0])];
        ranges
            .iter()
            .enumerate()
            .filter_map(|(i, &(lo, hi))| {
                let mut parts: Vec<Token> = Vec::new();
                if i > 0 {
                    parts.extend_from_slice(prefix);
                }
                parts.extend_from_slice(&tokens[lo..hi]);
                let joined = join_surfaces(&parts);
                tokenize(joined.trim_end_matches(|c: char| !c.is_alphanumeric())).ok()
            })
            .collect()
    }
}

/// [`Splitter::split`] with the default connective and modal lexicons.
pub fn split_expectations(req: &TokenizedRequirement) -> Vec<TokenizedRequirement> {
    Splitter::default().split(req)
}
