use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = selfsim::cli::run(std::env::args_os());
    if outcome.code == selfsim::cli::EXIT_INPUT {
        eprint!("{}", outcome.output);
    } else {
        let _ = std::io::stdout().write_all(outcome.output.as_bytes());
    }
    ExitCode::from(outcome.code as u8)
}
