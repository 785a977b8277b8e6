//! `qqforge`: Cartan data, qq-characters, bosonizations and current relations.

mod run;
mod suite;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = run::Cli::parse();
    let code = match run::with_pool(|| run::dispatch(&cli, &mut std::io::stdout().lock())) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qqforge: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}
