use std::process::ExitCode;

fn main() -> ExitCode {
    match ratlin::cli::run(std::env::args_os()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
