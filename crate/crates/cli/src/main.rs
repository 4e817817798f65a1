use std::process::ExitCode;

use clap::Parser;

use qes_cli::{emit, run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if let Err(e) = emit(&out) {
                eprintln!("qes: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("qes: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
