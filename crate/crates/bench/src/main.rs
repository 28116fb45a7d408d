use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = onebit_bench::cli::Cli::parse();
    match onebit_bench::cli::dispatch(cli) {
        Ok(output) => {
            print!("{}", output.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
