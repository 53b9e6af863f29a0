use std::process::ExitCode;

fn main() -> ExitCode {
    olk::cli::run(std::env::args_os())
}
