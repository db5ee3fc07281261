use clap::Parser;

use growth_optimal::cli::{error_line, run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    if let Err(e) = run(&config) {
        eprintln!("{}", error_line(&e));
        std::process::exit(e.exit_code());
    }
}
