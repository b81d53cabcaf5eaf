use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use g2morse_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (_, opts) = cli.command.split();
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = out.write_all(report.render(opts.output).as_bytes());
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
