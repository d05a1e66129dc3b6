use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = gorenstein_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
