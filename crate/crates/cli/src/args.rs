use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bitarm::measures::EntropyMode;

#[derive(Debug, Parser)]
#[command(
    name = "bitarm",
    version,
    about = "Mine association rules from similarity matrices with a bit-matrix itemset miner"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine ranked association rules from a similarity-matrix CSV
    Mine(MineArgs),
    /// Race the bit-matrix miner against the Apriori baseline on one corpus
    Benchmark(BenchmarkArgs),
    /// Generate a reproducible synthetic similarity-matrix CSV
    Synth(SynthArgs),
    /// Score an existing rule CSV with the interestingness measures
    Measures(MeasuresArgs),
}

#[derive(Debug, Args)]
pub struct MineArgs {
    /// Input similarity-matrix CSV
    pub input: PathBuf,
    /// Relative minimum support in (0, 1]
    #[arg(long, default_value_t = 0.1)]
    pub min_support: f64,
    /// Minimum rule confidence in (0, 1]
    #[arg(long, default_value_t = 0.7)]
    pub min_confidence: f64,
    /// Discretization: max-minus-x:<x> or beta:<b>
    #[arg(long, default_value_t = DiscretizeArg::MaxMinusX(25.0), value_parser = parse_discretize)]
    pub discretize: DiscretizeArg,
    /// Number of ranked rules to report
    #[arg(long, default_value_t = 15)]
    pub top: usize,
    /// Comma-separated measure acronyms, or "all"
    #[arg(long, default_value = "all")]
    pub measures: String,
    #[arg(long, value_enum, default_value_t = EntropyModeArg::Mean)]
    pub entropy_mode: EntropyModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    pub format: FormatArg,
    /// Count every k-column combination instead of filtering candidates
    /// through the frequent (k-1)-itemsets
    #[arg(long)]
    pub strict_paper: bool,
    /// Log (to stderr) the rules the found-counter early-exit heuristic
    /// would have skipped; the report itself always lists all rules
    #[arg(long)]
    pub paper_early_exit: bool,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Mine this CSV instead of a synthetic corpus
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Synthetic corpus seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Synthetic corpus rows
    #[arg(long, default_value_t = 5000)]
    pub rows: usize,
    /// Synthetic corpus items
    #[arg(long, default_value_t = 50)]
    pub items: usize,
    /// Synthetic corpus density of high cells, in (0, 1)
    #[arg(long, default_value_t = 0.4)]
    pub density: f64,
    #[arg(long, default_value_t = 0.1)]
    pub min_support: f64,
    /// Discretization: max-minus-x:<x> or beta:<b>
    #[arg(long, default_value_t = DiscretizeArg::MaxMinusX(25.0), value_parser = parse_discretize)]
    pub discretize: DiscretizeArg,
    /// Timing repetitions (the fastest is reported)
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long)]
    pub strict_paper: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub rows: usize,
    #[arg(long, default_value_t = 20)]
    pub items: usize,
    /// Density of high cells, in (0, 1)
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    /// Write the CSV to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    /// Rule CSV with header antecedent,consequent,n,n_a,n_b,n_ab
    pub input: PathBuf,
    /// Comma-separated measure acronyms, or "all"
    #[arg(long, default_value = "all")]
    pub measures: String,
    #[arg(long, value_enum, default_value_t = EntropyModeArg::Mean)]
    pub entropy_mode: EntropyModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscretizeArg {
    MaxMinusX(f64),
    Beta(f64),
}

impl fmt::Display for DiscretizeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscretizeArg::MaxMinusX(x) => write!(f, "max-minus-x:{x}"),
            DiscretizeArg::Beta(b) => write!(f, "beta:{b}"),
        }
    }
}

fn parse_discretize(s: &str) -> Result<DiscretizeArg, String> {
    let (method, value) = s
        .split_once(':')
        .ok_or_else(|| format!("expected max-minus-x:<x> or beta:<b>, got {s:?}"))?;
    let value: f64 = value
        .parse()
        .map_err(|_| format!("cannot parse {value:?} as a number"))?;
    match method {
        "max-minus-x" => Ok(DiscretizeArg::MaxMinusX(value)),
        "beta" => Ok(DiscretizeArg::Beta(value)),
        other => Err(format!("unknown discretization method {other:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntropyModeArg {
    Mean,
    Sum,
}

impl EntropyModeArg {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntropyModeArg::Mean => "mean",
            EntropyModeArg::Sum => "sum",
        }
    }
}

impl From<EntropyModeArg> for EntropyMode {
    fn from(m: EntropyModeArg) -> Self {
        match m {
            EntropyModeArg::Mean => EntropyMode::Mean,
            EntropyModeArg::Sum => EntropyMode::Sum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Tsv,
    Json,
}
