mod commands;

use std::process::ExitCode;

use clap::Parser;

use commands::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("psums: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psums: {e}");
            ExitCode::from(match e {
                CliError::Config(_) => 2,
                CliError::Lib(ref inner) => commands::exit_code(inner),
                CliError::Io(_) => 2,
            })
        }
    }
}
