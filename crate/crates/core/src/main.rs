use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use choquet::scenario::Scenario;

/// Audits and constructions for parametric polytopes and their representing measures.
#[derive(Debug, Parser)]
#[command(name = "choquet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured pipeline and write CSV reports.
    Run {
        config: PathBuf,
        /// Output directory (default: out/<scenario name>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the resolved plan without running it.
    Describe { config: PathBuf },
}

fn load(path: &Path, seed: Option<u64>) -> Result<Scenario, ExitCode> {
    match Scenario::load(path) {
        Ok(s) => Ok(match seed {
            Some(seed) => s.with_seed(seed),
            None => s,
        }),
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(2))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::Describe { config } => match load(&config, cli.seed) {
            Ok(s) => {
                print!("{}", s.describe());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Run { config, out } => {
            let scenario = match load(&config, cli.seed) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(&scenario.name));
            match scenario.run(&out) {
                Ok(summary) => {
                    for s in &summary.stages {
                        let status = if s.passed { "PASS" } else { "FAIL" };
                        match &s.failure {
                            Some(f) => println!("{status} {}: {f}", s.name),
                            None => println!("{status} {}", s.name),
                        }
                    }
                    println!("reports written to {}", out.display());
                    ExitCode::from(summary.exit_code())
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
    }
}
