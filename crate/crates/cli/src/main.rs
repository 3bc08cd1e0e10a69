use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rankforge::args::Cli;
use rankforge::execute;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(outcome.view.render(cli.global.format).as_bytes())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if let Some(note) = &outcome.note {
                eprintln!("rankforge: {note}");
            }
            ExitCode::from(outcome.status.code() as u8)
        }
        Err(e) => {
            eprintln!("rankforge: error: {e}");
            if let Some(hint) = e.hint() {
                eprintln!("rankforge: hint: {hint}");
            }
            ExitCode::from(e.status().code() as u8)
        }
    }
}
