use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use contact_lcp_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap would exit with 2 on usage errors, which is taken by invalid solutions
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Outcome::Usage.code() as u8),
            };
        }
    };
    let outcome = run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(outcome.code() as u8)
}
