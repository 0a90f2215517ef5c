use clap::Parser;

use keller_kit_cli::cli::{run, Cli};

fn main() {
    if let Err(err) = run(Cli::parse()) {
        eprintln!("error: {}", err.message);
        std::process::exit(err.code);
    }
}
