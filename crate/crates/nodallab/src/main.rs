use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nodallab::{list_experiments, run_experiment, write_outputs, Config, HarnessError};

#[derive(Parser)]
#[command(name = "nodallab", version, about = "Nodal-set experiments for Dirac and Laplace eigensections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered experiments.
    List,
    /// Run one experiment and write its outputs.
    Run {
        /// Experiment id, E1 to E9.
        id: String,
        /// TOML file overriding the defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: out/<id>).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Finest grid resolution per axis (power of two).
        #[arg(long)]
        resolution: Option<usize>,
    },
}

fn run(id: &str, config: Option<PathBuf>, out: Option<PathBuf>, seed: Option<u64>, resolution: Option<usize>) -> Result<bool, HarnessError> {
    let mut cfg = match config {
        Some(path) => Config::load(&path)?,
        None => Config::default(),
    };
    if resolution.is_some() {
        cfg.grid.resolution = resolution;
    }
    let result = run_experiment(id, &cfg, seed)?;
    let dir = out.unwrap_or_else(|| PathBuf::from("out").join(&result.summary.id));
    write_outputs(&dir, &result)?;
    for c in &result.summary.criteria {
        println!("{} {:<4} {} = {}", result.summary.id, if c.pass { "PASS" } else { "FAIL" }, c.criterion, c.value);
    }
    println!("{}: {} (outputs in {})", result.summary.id, if result.summary.pass { "PASS" } else { "FAIL" }, dir.display());
    Ok(result.summary.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            for (id, claim, anchor) in list_experiments() {
                println!("{id}\t{claim}\t{anchor}");
            }
            ExitCode::SUCCESS
        }
        Command::Run { id, config, out, seed, resolution } => match run(&id, config, out, seed, resolution) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("nodallab: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
