//! Classification and quantification of natural-language performance
//! requirements.
//!
//! A requirement such as "the search shall take no longer than 15 seconds" is
//! matched against a knowledge base of short linguistic patterns. The best
//! pattern yields a preference label `<left,right>` over the two sides of the
//! expectation point (15) and the label compiles to a piecewise-linear
//! satisfaction function `g(v)` mapping a measured value to a score in `[0,1]`.
//!
//! The crate is `no_std` and only needs `alloc`. File access, the evaluation
//! harness and the command line live in the `perfreq` crate.
//!
//! ```
//! use perfreq_core::kb::{Pattern, PatternKb};
//! use perfreq_core::embeddings::VectorStore;
//! use perfreq_core::model::ClassLabel;
//! use perfreq_core::pipeline::{Engine, QuantificationRequest};
//!
//! let mut kb = PatternKb::with_default_negations();
//! kb.insert(Pattern::parse("in <N>", "E,S".parse::<ClassLabel>().unwrap()).unwrap());
//! let store = VectorStore::new(2).unwrap();
//! let engine = Engine::new(&kb, &store);
//!
//! let request = QuantificationRequest::new("The system should response in 2 seconds")
//!     .with_bounds(0.0, 10.0);
//! let result = engine.quantify(&request).unwrap();
//! assert_eq!(result.function.evaluate(2.0), 1.0);
//! assert_eq!(result.function.evaluate(10.0), 0.0);
//! ```

#![no_std]

extern crate alloc;

pub mod embeddings;
pub mod kb;
pub mod lexicon;
pub mod matcher;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod text;

pub use embeddings::VectorStore;
pub use kb::{Pattern, PatternKb};
pub use matcher::{MatchResult, MatcherConfig};
pub use model::{ClassLabel, FragmentKind, MetricDirection, SatisfactionFunction};
pub use pipeline::{Engine, QuantificationRequest, QuantificationResult};
pub use text::{tokenize, TokenizedRequirement};
