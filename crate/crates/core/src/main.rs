use std::io::Write;
use std::process::ExitCode;

use bppdist::cli::{render, run, Cli};
use clap::Parser;

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(&cli, &invocation) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(render(&out.table, cli.format).as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                eprintln!("bppdist: one or more validation checks failed");
                ExitCode::from(EXIT_VALIDATION)
            }
        }
        Err(e) => {
            eprintln!("bppdist: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
