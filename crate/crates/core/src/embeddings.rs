//! Word vectors and averaged sentence vectors.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::kb::PLACEHOLDER;
use crate::text::parse_number;

/// Word whose vector stands in for numbers and the `<N>` placeholder.
pub const NUMBER_WORD: &str = "number";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: &'static str },
    #[error("line {line}: expected {expected} components, found {found}")]
    DimensionMismatch { line: usize, expected: usize, found: usize },
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension must be positive")]
    ZeroDimension,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorStore {
    dimension: usize,
    entries: BTreeMap<String, Vec<f64>>,
}

impl VectorStore {
    pub fn new(dimension: usize) -> Result<Self, EmbeddingError> {
        if dimension == 0 {
            return Err(EmbeddingError::ZeroDimension);
        }
        Ok(VectorStore { dimension, entries: BTreeMap::new() })
    }

    pub fn insert(&mut self, word: &str, vector: Vec<f64>) -> Result<(), EmbeddingError> {
        if vector.len() != self.dimension {
            return Err(EmbeddingError::LengthMismatch(self.dimension, vector.len()));
        }
        self.entries.insert(String::from(word), vector);
        Ok(())
    }

    /// Parses the word2vec text format: a `vocab_size dimension` header, then
    /// one `word v1 .. vd` line per word.
    pub fn from_word2vec_text(text: &str) -> Result<Self, EmbeddingError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(EmbeddingError::Format { line: 1, message: "missing header" })?;
        let mut fields = header.split_whitespace();
        let header_err = EmbeddingError::Format { line: 1, message: "header must be `vocab_size dimension`" };
        let vocab: usize = fields.next().and_then(|f| f.parse().ok()).ok_or(header_err.clone())?;
        let dimension: usize = fields.next().and_then(|f| f.parse().ok()).ok_or(header_err.clone())?;
        if fields.next().is_some() {
            return Err(header_err);
        }
        let mut store = VectorStore::new(dimension)?;
        for (i, line) in lines {
            let line_no = i + 1;
            let mut fields = line.split_whitespace();
            let word = fields.next().ok_or(EmbeddingError::Format { line: line_no, message: "missing word" })?;
            let mut vector = Vec::with_capacity(dimension);
            for f in fields {
                let value: f64 =
                    f.parse().map_err(|_| EmbeddingError::Format { line: line_no, message: "invalid number" })?;
                vector.push(value);
            }
            if vector.len() != dimension {
                return Err(EmbeddingError::DimensionMismatch { line: line_no, expected: dimension, found: vector.len() });
            }
            if store.entries.insert(String::from(word), vector).is_some() {
                return Err(EmbeddingError::Format { line: line_no, message: "duplicate word" });
            }
        }
        if store.len() != vocab {
            return Err(EmbeddingError::Format { line: 1, message: "vocab_size does not match the number of entries" });
        }
        Ok(store)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    fn lookup(&self, token: &str) -> Option<(&str, &[f64])> {
        let key = if token == PLACEHOLDER || parse_number(token).is_some() { NUMBER_WORD } else { token };
        self.entries.get_key_value(key).map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Mean of the in-vocabulary token vectors. Numbers and `<N>` use the
    /// vector of `"number"` when present; other unknown tokens are skipped.
    /// Returns the zero vector when nothing is known.
    pub fn sentence_vector<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<f64> {
        let mut found: Vec<(&str, &[f64])> = tokens.iter().filter_map(|t| self.lookup(t.as_ref())).collect();
        // Summing in word order makes the mean independent of token order.
        found.sort_unstable_by(|a, b| a.0.cmp(b.0));
        let mut sum = vec![0.0; self.dimension];
        for (_, v) in &found {
            for (acc, x) in sum.iter_mut().zip(v.iter()) {
                *acc += x;
            }
        }
        if !found.is_empty() {
            let n = found.len() as f64;
            sum.iter_mut().for_each(|x| *x /= n);
        }
        sum
    }
}

/// Cosine similarity, 0 when either vector has zero norm.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, EmbeddingError> {
    if u.len() != v.len() {
        return Err(EmbeddingError::LengthMismatch(u.len(), v.len()));
    }
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (libm::sqrt(nu) * libm::sqrt(nv))).clamp(-1.0, 1.0))
}
