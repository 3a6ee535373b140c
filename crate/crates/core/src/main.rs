use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = hodgecw::cli::run(std::env::args_os());
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    ExitCode::from(code as u8)
}
