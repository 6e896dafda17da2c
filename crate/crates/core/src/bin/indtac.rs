use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use indtac::cli::{run_script, RunMode, Session};

#[derive(Parser)]
#[command(name = "indtac", version, about = "Check proof scripts or serve an interactive proof session")]
struct Cli {
    /// Log the transparency of every definitional equality check to stderr.
    #[arg(long, global = true)]
    transparency_log: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every declaration and lemma of a file.
    Check {
        /// Print the goals after every tactic.
        #[arg(long)]
        golden: bool,
        file: PathBuf,
    },
    /// Run the JSON session protocol on stdin and stdout.
    Serve,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.transparency_log {
        env_logger::Builder::new().filter_module("transparency", log::LevelFilter::Debug).init();
    }
    match cli.command {
        Cmd::Check { golden, file } => {
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let mode = if golden { RunMode::Golden } else { RunMode::Check };
            let (report, _) = run_script(&src, mode);
            print!("{}", report.render(mode));
            if report.all_proved() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Cmd::Serve => {
            let stdin = io::stdin();
            match Session::new().serve(stdin.lock(), io::stdout().lock()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
