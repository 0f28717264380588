use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    ExitCode::from(kq::cli::run(
        std::env::args_os(),
        |k| std::env::var(k).ok(),
        &mut stdout,
    ))
}
