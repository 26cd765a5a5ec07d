use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = artgallery_workbench::cli::Cli::parse();
    match artgallery_workbench::cli::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
