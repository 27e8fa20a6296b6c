use clap::Parser;
use twocentre_cli::{run, Cli};

fn main() {
    // clap exits with status 2 on malformed arguments.
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}
