use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use nilsep::cli::{error_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(resp) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = out.write_all(resp.render(cli.json).as_bytes());
            ExitCode::from(resp.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e) as u8)
        }
    }
}
