use std::io::Write;
use std::process::ExitCode;

use wiretap_bench::{run, Outcome};

fn main() -> ExitCode {
    match run(std::env::args_os()) {
        Ok(Outcome::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Stdout(body)) => {
            let mut out = std::io::stdout().lock();
            match out.write_all(body.as_bytes()).and_then(|()| out.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Ok(Outcome::Written { .. }) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
