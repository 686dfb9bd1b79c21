use std::process::ExitCode;

use clap::Parser;
use thermowork::Execution;
use thermowork_cli::{commands, exit, Cli, CliError, Command};

fn run(cli: Cli) -> Result<u8, CliError> {
    let exec = Execution::Parallel;
    match cli.command {
        Command::Sweep(args) => {
            let result = commands::sweep(&args, exec)?;
            commands::write_output(args.out.as_deref(), &result.output)?;
            eprintln!(
                "sweep: {} points, {} failed",
                result.rows.len(),
                result.failures.len()
            );
            for (g, msg) in &result.failures {
                eprintln!("  g/omega = {g}: {msg}");
            }
            Ok(if result.failures.is_empty() {
                exit::SUCCESS
            } else {
                exit::NUMERICAL
            })
        }
        Command::Point(args) => {
            let json = commands::point(&args)?;
            commands::write_output(None, &json)?;
            Ok(exit::SUCCESS)
        }
        Command::Audit(args) => {
            let result = commands::audit(&args, exec)?;
            commands::write_output(None, &result.summary)?;
            if !result.clean {
                eprintln!("audit: bound violations or evaluation failures found");
            }
            Ok(if result.clean {
                exit::SUCCESS
            } else {
                exit::NUMERICAL
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
