use std::process::ExitCode;

use clap::Parser;
use freeprod_cli::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Human => print!("{}", out.human()),
                Format::Machine => println!("{}", out.machine()),
            }
            if out.is_violation() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
