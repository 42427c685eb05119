use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ctrie::{Config, KeywordDictionary};
use ctrie_bench::memory::CountingAlloc;
use ctrie_bench::{corpus, histograms, run_workload, stats, synth, BuildOrder, Phase, QueryOrder, Split, SynthSpec, WorkloadSpec};

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

#[derive(Parser)]
#[command(name = "ctrie", version, about = "Keyword dictionary corpus tools and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Split a raw file into a duplicate-free keyword list.
    Prepare {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "newline")]
        split: Split,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print corpus characteristics.
    Stats {
        file: PathBuf,
        /// Also print length, LCP and dictionary size histograms.
        #[arg(long)]
        histograms: bool,
        #[arg(long = "config", value_name = "KEY=VAL")]
        config: Vec<String>,
    },
    /// Time one workload phase and write a TSV row per measurement.
    Bench {
        file: PathBuf,
        #[arg(long, value_enum)]
        phase: Phase,
        #[arg(long, value_enum, default_value = "random")]
        build_order: BuildOrder,
        #[arg(long, value_enum, default_value = "same")]
        query_order: QueryOrder,
        #[arg(long, value_delimiter = ',', default_value = "0.6,0.7,0.8,0.9,1.0")]
        fractions: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "config", value_name = "KEY=VAL")]
        config: Vec<String>,
        /// Output file; standard output when absent.
        #[arg(long)]
        tsv: Option<PathBuf>,
        /// Dataset label, defaults to the file stem.
        #[arg(long)]
        dataset: Option<String>,
        /// Off writes zero time and memory so seeded runs are reproducible.
        #[arg(long, value_enum, default_value = "on")]
        timing: Switch,
    },
    /// Write a synthetic corpus with shared prefixes.
    Synth {
        #[arg(long, default_value_t = 100_000)]
        keywords: usize,
        #[arg(long, default_value_t = 100)]
        avg_len: usize,
        #[arg(long, default_value_t = 2_000)]
        stems: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_config(pairs: &[String]) -> Result<Config> {
    let mut c = Config::default();
    for p in pairs {
        let Some((k, v)) = p.split_once('=') else {
            bail!("expected KEY=VAL, got {p:?}");
        };
        c.set(k.trim(), v.trim())?;
    }
    Ok(c)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Prepare { input, split, out } => {
            let c = corpus::prepare(&input, split)?;
            corpus::write(&c.keywords, &out)?;
            eprintln!("{} keywords, {} bytes", c.len(), c.total_bytes());
        }
        Command::Stats {
            file,
            histograms: hist,
            config,
        } => {
            let c = corpus::load(&file)?;
            println!("{}", stats(&c.keywords)?);
            if hist {
                let mut d = KeywordDictionary::with_config(parse_config(&config)?)?;
                for k in &c.keywords {
                    d.insert(k)?;
                }
                print!("{}", histograms(&c.keywords, &d));
            }
        }
        Command::Bench {
            file,
            phase,
            build_order,
            query_order,
            fractions,
            seed,
            config,
            tsv,
            dataset,
            timing,
        } => {
            let c = corpus::load(&file)?;
            let spec = WorkloadSpec {
                dataset: dataset.unwrap_or_else(|| {
                    file.file_stem().map_or("corpus".into(), |s| s.to_string_lossy().into_owned())
                }),
                phase,
                build_order,
                query_order,
                fractions,
                seed,
                config: parse_config(&config)?,
                timing: timing == Switch::On,
            };
            let report = run_workload(&c.keywords, &spec)?;
            match tsv {
                Some(p) => {
                    let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    report.write_tsv(BufWriter::new(f))?;
                }
                None => report.write_tsv(std::io::stdout().lock())?,
            }
        }
        Command::Synth {
            keywords,
            avg_len,
            stems,
            seed,
            out,
        } => {
            let k = synth(&SynthSpec {
                keywords,
                avg_len,
                stems,
                seed,
            });
            corpus::write(&k, &out)?;
        }
    }
    Ok(())
}
