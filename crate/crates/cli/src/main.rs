use clap::Parser;
use hdepth_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("hdepth: {e}");
        std::process::exit(e.exit_code());
    }
}
