use clap::Parser;

use magnus_tls::cli::{self, Args};

fn main() {
    let args = Args::parse();
    if let Err(err) = cli::run(&args) {
        eprintln!("error: {err:#}");
        std::process::exit(err.exit_code());
    }
}
