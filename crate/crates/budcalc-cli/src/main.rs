use std::process::ExitCode;

use budcalc_cli::{render_text, run, Cli, OutputFormat};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match cli.output {
                OutputFormat::Json => println!("{}", outcome.report),
                OutputFormat::Text => print!("{}", render_text(&outcome.report)),
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
