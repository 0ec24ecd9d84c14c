//! File formats, the bundled data set, the evaluation harness and the
//! command line for [`perfreq_core`].

pub mod bundled;
pub mod cli;
pub mod dataset;
pub mod eval;
pub mod io;

pub use dataset::{load_dataset, parse_dataset, DatasetError, LabeledRequirement};
pub use eval::{bootstrap_eval, cross_dataset_eval, EvalConfig, EvalError, EvalReport, TrainSize};
pub use io::Error;
