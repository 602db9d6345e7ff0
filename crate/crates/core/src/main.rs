use clap::Parser;

use kerr_teleport::cli::{emit, execute, Cli};

fn main() {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|(content, out)| emit(&content, out.as_ref()));
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
