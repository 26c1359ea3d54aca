use std::process::ExitCode;

fn main() -> ExitCode {
    hypq::cli::main_entry()
}
