use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(spinbath_cli::app::main_with(std::env::args_os(), &mut std::io::stdout().lock()))
}
