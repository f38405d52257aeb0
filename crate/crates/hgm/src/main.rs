use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HGM_LOG", "warn")).init();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = hgm::cli::run(std::env::args_os(), &mut out);
    ExitCode::from(code as u8)
}
