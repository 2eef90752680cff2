use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = ibx_cli::run(std::env::args());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(report.stdout().as_bytes());
    if let Some(err) = &report.error {
        eprintln!("{}", err.trim_end());
    }
    ExitCode::from(report.exit_code as u8)
}
