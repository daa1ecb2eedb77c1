use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use qcst_cli::cli::{self, Cli};

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli::run(parsed) {
        Ok(output) => {
            print!("{}", output.text);
            ExitCode::from(output.code as u8)
        }
        Err(err) => {
            eprintln!("qcst: {}", err.message());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
