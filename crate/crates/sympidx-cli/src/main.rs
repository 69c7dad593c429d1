use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use sympidx_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli, |name| std::env::var(name).ok());
    let written = match (&cli.common.output, outcome.exit_code) {
        (Some(path), code) if code != 2 || !outcome.text.starts_with("error:") => std::fs::write(path, &outcome.text),
        _ if outcome.text.starts_with("error:") => std::io::stderr().write_all(outcome.text.as_bytes()),
        _ => std::io::stdout().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code as u8)
}
