use std::process::ExitCode;

fn main() -> ExitCode {
    qcms::cli::main()
}
