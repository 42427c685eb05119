//! Timed insert, locate and prefix phases with TSV output.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use ctrie::{Config, KeywordDictionary};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::BenchError;
use crate::memory::{self, MemorySource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Phase {
    Insert,
    Locate,
    Prefix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BuildOrder {
    Random,
    Sorted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum QueryOrder {
    Random,
    Sorted,
    /// Whatever order the dictionary was built in.
    Same,
}

impl fmt::Display for BuildOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BuildOrder::Random => "random",
            BuildOrder::Sorted => "sorted",
        })
    }
}

impl fmt::Display for QueryOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryOrder::Random => "random",
            QueryOrder::Sorted => "sorted",
            QueryOrder::Same => "same",
        })
    }
}

#[derive(Debug, Clone)]
pub struct WorkloadSpec {
    pub dataset: String,
    pub phase: Phase,
    pub build_order: BuildOrder,
    pub query_order: QueryOrder,
    /// Prefix lengths as fractions of the average keyword length.
    pub fractions: Vec<f64>,
    pub seed: u64,
    pub config: Config,
    /// Off: report zero time and memory, so output depends on the seed only.
    pub timing: bool,
}

impl WorkloadSpec {
    pub fn new(dataset: impl Into<String>, phase: Phase) -> Self {
        WorkloadSpec {
            dataset: dataset.into(),
            phase,
            build_order: BuildOrder::Random,
            query_order: QueryOrder::Same,
            fractions: vec![0.6, 0.7, 0.8, 0.9, 1.0],
            seed: 1,
            config: Config::default(),
            timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub dataset: String,
    pub phase: String,
    pub order: String,
    pub mean_ns: f64,
    pub peak_bytes: u64,
    pub ops: u64,
    /// Successful locates, or identifiers reported by prefix queries.
    pub matches: u64,
}

#[derive(Debug, Clone)]
pub struct WorkloadReport {
    pub rows: Vec<Row>,
    pub total_ns: u128,
    pub memory_source: MemorySource,
}

pub const TSV_HEADER: &str = "dataset\tphase\torder\tmean_ns\tpeak_bytes\tops\tmatches";

impl WorkloadReport {
    pub fn write_tsv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "# memory-source: {}", self.memory_source.name())?;
        writeln!(w, "{TSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{}\t{}\t{}\t{:.1}\t{}\t{}\t{}",
                r.dataset, r.phase, r.order, r.mean_ns, r.peak_bytes, r.ops, r.matches
            )?;
        }
        Ok(())
    }
}

fn ordered<'a>(keywords: &'a [Vec<u8>], sorted: bool, rng: &mut ChaCha8Rng) -> Vec<&'a [u8]> {
    let mut v: Vec<&[u8]> = keywords.iter().map(|k| k.as_slice()).collect();
    if sorted {
        v.sort_unstable();
    } else {
        v.shuffle(rng);
    }
    v
}

struct Clock {
    on: bool,
    start: Instant,
}

impl Clock {
    fn start(on: bool) -> Self {
        if on {
            memory::reset_peak();
        }
        Clock {
            on,
            start: Instant::now(),
        }
    }

    /// Mean nanoseconds per op and peak bytes, zero when timing is off.
    fn stop(self, ops: u64) -> (f64, u64) {
        if !self.on {
            return (0.0, 0);
        }
        let ns = self.start.elapsed().as_nanos() as f64;
        (ns / ops.max(1) as f64, memory::peak().0)
    }
}

pub fn run_workload(keywords: &[Vec<u8>], spec: &WorkloadSpec) -> Result<WorkloadReport, BenchError> {
    if keywords.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }
    if spec.phase == Phase::Prefix && spec.fractions.is_empty() {
        return Err(BenchError::Usage("prefix phase needs at least one fraction".into()));
    }
    let wall = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let build = ordered(keywords, spec.build_order == BuildOrder::Sorted, &mut rng);
    let queries = match spec.query_order {
        QueryOrder::Same => build.clone(),
        QueryOrder::Sorted => ordered(keywords, true, &mut rng),
        QueryOrder::Random => ordered(keywords, false, &mut rng),
    };
    let order = format!("{}/{}", spec.build_order, spec.query_order);
    let row = |phase: String, (mean_ns, peak_bytes): (f64, u64), ops: u64, matches: u64| Row {
        dataset: spec.dataset.clone(),
        phase,
        order: order.clone(),
        mean_ns,
        peak_bytes,
        ops,
        matches,
    };
    let mut dict = KeywordDictionary::with_config(spec.config.clone())?;
    let mut rows = Vec::new();
    let clock = Clock::start(spec.timing && spec.phase == Phase::Insert);
    for k in &build {
        dict.insert(k)?;
    }
    let n = build.len() as u64;
    if spec.phase == Phase::Insert {
        rows.push(row("insert".into(), clock.stop(n), n, n));
    }
    match spec.phase {
        Phase::Insert => {}
        Phase::Locate => {
            let clock = Clock::start(spec.timing);
            let found = queries.iter().filter(|q| dict.locate(q).is_some()).count() as u64;
            rows.push(row("locate".into(), clock.stop(n), n, found));
        }
        Phase::Prefix => {
            let avg = keywords.iter().map(|k| k.len()).sum::<usize>() as f64 / keywords.len() as f64;
            for &f in &spec.fractions {
                let len = (f * avg).round() as usize;
                let prefixes: Vec<&[u8]> = queries.iter().map(|q| &q[..len.min(q.len())]).collect();
                let clock = Clock::start(spec.timing);
                let mut matches = 0u64;
                for p in &prefixes {
                    matches += dict.locate_prefix(p).count() as u64;
                }
                rows.push(row(format!("prefix@{f}"), clock.stop(n), n, matches));
            }
        }
    }
    Ok(WorkloadReport {
        rows,
        total_ns: if spec.timing { wall.elapsed().as_nanos() } else { 0 },
        memory_source: if spec.timing {
            memory::peak().1
        } else {
            MemorySource::Off
        },
    })
}
