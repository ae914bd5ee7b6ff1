use clap::Parser;

use deglab_cli::cli::{execute, Cli};

fn main() {
    std::process::exit(execute(Cli::parse()));
}
