use std::process::ExitCode;

fn main() -> ExitCode {
    tokfuse::cli::main()
}
