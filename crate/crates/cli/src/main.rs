use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(topolasso_cli::run(std::env::args_os()))
}
