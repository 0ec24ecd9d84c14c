//! Data files compiled into the binary.

use perfreq_core::kb::PatternKb;
use perfreq_core::lexicon::Lexicon;
use perfreq_core::pipeline::DirectionLexicon;
use perfreq_core::VectorStore;

use crate::dataset::{parse_dataset, LabeledRequirement};

pub const PATTERNS_TSV: &str = include_str!("../data/patterns.tsv");
/// 300 words, 50 dimensions.
pub const MINI_VECTORS: &str = include_str!("../data/mini_vectors.txt");
/// 30 hand-labeled requirements covering all nine classes.
pub const MINI_CORPUS_CSV: &str = include_str!("../data/mini_corpus.csv");
pub const HOLDOUT_CSV: &str = include_str!("../data/holdout.csv");
pub const NEGATION_WORDS: &str = include_str!("../data/negation_words.txt");
pub const COMPLEMENT_WORDS: &str = include_str!("../data/complement_words.txt");
pub const CONNECTIVES: &str = include_str!("../data/connectives.txt");
pub const VERBS: &str = include_str!("../data/verbs.txt");
pub const DIRECTION_WORDS: &str = include_str!("../data/direction_words.tsv");

pub fn patterns() -> PatternKb {
    let mut kb = PatternKb::new(negations());
    kb.load_tsv(PATTERNS_TSV).expect("bundled patterns parse");
    kb
}

pub fn vectors() -> VectorStore {
    VectorStore::from_word2vec_text(MINI_VECTORS).expect("bundled vectors parse")
}

pub fn negations() -> Lexicon {
    Lexicon::parse(NEGATION_WORDS)
}

pub fn complements() -> Lexicon {
    Lexicon::parse(COMPLEMENT_WORDS)
}

pub fn directions() -> DirectionLexicon {
    DirectionLexicon::parse(DIRECTION_WORDS).expect("bundled direction words parse")
}

pub fn mini_corpus() -> Vec<LabeledRequirement> {
    parse_dataset(MINI_CORPUS_CSV).expect("bundled corpus parses")
}

pub fn holdout() -> Vec<LabeledRequirement> {
    parse_dataset(HOLDOUT_CSV).expect("bundled holdout parses")
}
