use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use graphgeom::cli::{run, Cli};
use graphgeom::exit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                exit::INVALID_ARGS
            } else {
                exit::OK
            };
            return ExitCode::from(code as u8);
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = match run(cli, &mut lock) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let _ = lock.flush();
    ExitCode::from(code as u8)
}
