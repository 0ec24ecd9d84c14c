//! Word lists: one lowercase entry per line, `#` starts a comment line.

use alloc::collections::BTreeSet;
use alloc::string::String;

/// A set of normalized words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    words: BTreeSet<String>,
}

pub const DEFAULT_NEGATIONS: &[&str] = &[
    "not", "no", "neither", "nor", "never", "none", "nobody", "nothing", "nowhere", "cannot", "can't",
    "won't", "don't", "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't", "shouldn't", "mustn't",
    "shan't", "hardly", "barely",
];

pub const DEFAULT_COMPLEMENTS: &[&str] = &[
    "in", "under", "at", "least", "most", "more", "less", "than", "within", "every", "no", "up", "to", "be",
    "capable", "of", "supporting", "longer", "shorter", "fewer", "exceed", "not", "a", "minimum", "maximum",
    "once", "approximately", "about", "around", "far", "away", "from", "ideally", "over", "below", "above",
];

pub const DEFAULT_CONNECTIVES: &[&str] = &["and", "or", "while", "but", "whereas", ";", ","];

pub const DEFAULT_MODALS: &[&str] = &["shall", "should", "must", "will", "can"];

pub const DEFAULT_STOPWORDS: &[&str] = &[
    "the", "a", "an", "of", "to", "for", "and", "or", "on", "by", "with", "this", "that", "it", "its", "is",
    "are", "as",
];

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses the line-oriented file format. Entries are trimmed and
    /// lowercased; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        text.lines()
            .map(str::trim)
            .filter(|line| !line.is_empty() && !line.starts_with('#'))
            .collect()
    }

    pub fn from_words(words: &[&str]) -> Self {
        words.iter().copied().collect()
    }

    pub fn insert(&mut self, word: &str) -> bool {
        self.words.insert(word.trim().to_lowercase())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Renders in the file format, sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for word in &self.words {
            out.push_str(word);
            out.push('\n');
        }
        out
    }
}

impl<'a> FromIterator<&'a str> for Lexicon {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        Lexicon { words: iter.into_iter().map(|w| w.trim().to_lowercase()).collect() }
    }
}

impl FromIterator<String> for Lexicon {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        Lexicon { words: iter.into_iter().map(|w| w.trim().to_lowercase()).collect() }
    }
}
