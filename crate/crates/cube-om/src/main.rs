use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cube_om::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli);
    print!("{}", outcome.stdout);
    if !outcome.stderr.is_empty() {
        let _ = write!(std::io::stderr(), "{}", outcome.stderr);
    }
    ExitCode::from(outcome.exit)
}
