use clap::Parser;

use sigpair::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("sigpair: {err}");
        std::process::exit(err.exit_code());
    }
}
