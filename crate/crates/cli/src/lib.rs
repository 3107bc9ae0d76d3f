//! Command-line driver: discretize, mine, rank, score, benchmark, and
//! generate synthetic corpora. See the repository README for the report
//! formats and exit codes.

mod args;
mod commands;
mod error;
mod report;

pub use args::{Cli, Command};
pub use error::CliError;

pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Mine(args) => commands::cmd_mine(args),
        Command::Benchmark(args) => commands::cmd_benchmark(args),
        Command::Synth(args) => commands::cmd_synth(args),
        Command::Measures(args) => commands::cmd_measures(args),
    }
}
