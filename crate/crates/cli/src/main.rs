use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let run = ql_bridge_cli::execute(std::env::args_os());
    let _ = std::io::stdout().write_all(run.stdout.as_bytes());
    let _ = std::io::stderr().write_all(run.stderr.as_bytes());
    ExitCode::from(u8::try_from(run.code).unwrap_or(1))
}
