//! Reading and writing the on-disk formats.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use perfreq_core::embeddings::EmbeddingError;
use perfreq_core::kb::{KbError, PatternKb};
use perfreq_core::lexicon::Lexicon;
use perfreq_core::pipeline::{DirectionLexicon, PipelineError};
use perfreq_core::VectorStore;
use thiserror::Error;

use crate::dataset::{self, DatasetError, LabeledRequirement};

/// A failure tied to the file it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Patterns { path: PathBuf, source: KbError },
    #[error("{}: {source}", path.display())]
    Vectors { path: PathBuf, source: EmbeddingError },
    #[error("{}: {source}", path.display())]
    Dataset { path: PathBuf, source: DatasetError },
    #[error("{}: {source}", path.display())]
    Directions { path: PathBuf, source: PipelineError },
}

pub fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so a failed write never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Error> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Loads a `patterns.tsv` file into a knowledge base with the default
/// negation lexicon.
pub fn load_patterns(path: &Path) -> Result<PatternKb, Error> {
    let mut kb = PatternKb::with_default_negations();
    kb.load_tsv(&read_text(path)?).map_err(|source| Error::Patterns { path: path.to_path_buf(), source })?;
    Ok(kb)
}

pub fn save_patterns(kb: &PatternKb, path: &Path) -> Result<(), Error> {
    write_atomic(path, kb.to_tsv().as_bytes())
}

pub fn load_vectors(path: &Path) -> Result<VectorStore, Error> {
    VectorStore::from_word2vec_text(&read_text(path)?).map_err(|source| Error::Vectors { path: path.to_path_buf(), source })
}

/// One word per line, `#` comments allowed.
pub fn load_lexicon(path: &Path) -> Result<Lexicon, Error> {
    Ok(Lexicon::parse(&read_text(path)?))
}

pub fn load_directions(path: &Path) -> Result<DirectionLexicon, Error> {
    DirectionLexicon::parse(&read_text(path)?).map_err(|source| Error::Directions { path: path.to_path_buf(), source })
}

pub fn load_dataset(path: &Path) -> Result<Vec<LabeledRequirement>, Error> {
    dataset::parse_dataset(&read_text(path)?).map_err(|source| Error::Dataset { path: path.to_path_buf(), source })
}
