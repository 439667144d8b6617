use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = weilc::cli::run(std::env::args_os());
    if code == weilc::cli::EXIT_PASS || code == weilc::cli::EXIT_CHECK {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    ExitCode::from(code as u8)
}
