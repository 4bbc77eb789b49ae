use std::process::ExitCode;

fn main() -> ExitCode {
    answerset::cli::main()
}
