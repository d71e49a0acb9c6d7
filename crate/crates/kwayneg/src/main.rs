use clap::Parser;

use kwayneg::cli;

fn main() {
    let parsed = cli::Cli::parse();
    match cli::run(&parsed) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            std::process::exit(outcome.code);
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
