//! Corpus preparation, statistics and timed workloads for the `ctrie`
//! keyword dictionary.

pub mod corpus;
pub mod error;
pub mod memory;
pub mod stats;
pub mod synth;
pub mod workload;

pub use corpus::{load, prepare, split_bytes, Corpus, Split};
pub use error::BenchError;
pub use stats::{histograms, stats, CorpusStats, Histogram, Histograms};
pub use synth::{synth, SynthSpec};
pub use workload::{run_workload, BuildOrder, Phase, QueryOrder, Row, WorkloadReport, WorkloadSpec};
