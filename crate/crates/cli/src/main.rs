use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod algo;
mod bench;
mod gen;
mod run;
mod verify;

#[derive(Debug, Parser)]
#[command(name = "hvbox", version, about = "Hypervolume by box decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the hypervolume of every front in a point file.
    Run(run::RunArgs),
    /// Generate an instance.
    Gen(gen::GenArgs),
    /// Cross-check all algorithms against the oracles on random instances.
    Verify(verify::VerifyArgs),
    /// Time algorithms over an instance grid and write CSV.
    Bench(bench::BenchArgs),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<hvbox::Error>() {
        Some(hvbox::Error::Budget(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => run::run(a).map(|_| ExitCode::SUCCESS),
        Command::Gen(a) => gen::gen(a).map(|_| ExitCode::SUCCESS),
        Command::Verify(a) => verify::verify(a),
        Command::Bench(a) => bench::bench(a).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
