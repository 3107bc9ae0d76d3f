use clap::Parser;

fn main() {
    let cli = bitarm_cli::Cli::parse();
    if let Err(err) = bitarm_cli::run(cli) {
        eprintln!("{}", err.to_machine_readable());
        std::process::exit(err.exit_code());
    }
}
