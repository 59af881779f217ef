use clap::Parser;

use semigroup_isoform::cli::{configure_threads_from_env, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_threads_from_env() {
        eprintln!("error: {e}");
        std::process::exit(e.code.code());
    }
    std::process::exit(run(&cli));
}
