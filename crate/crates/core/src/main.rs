use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    ExitCode::from(polar_kernels::cli::run(std::env::args_os(), &mut out, &mut err))
}
