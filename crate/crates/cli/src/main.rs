use std::io;
use std::process::ExitCode;

use crem_cli::{default_registry, run, Io, FEEDBACK_CAP_ENV};

fn main() -> ExitCode {
    let stdin = io::stdin();
    let mut stdin = stdin.lock();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    let exit = run(
        &default_registry(),
        std::env::args_os(),
        Io {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
            env_feedback_cap: std::env::var(FEEDBACK_CAP_ENV).ok(),
        },
    );
    ExitCode::from(exit.code() as u8)
}
