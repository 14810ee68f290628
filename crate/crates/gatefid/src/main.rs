use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gatefid::{run_file, CliError, Mode, Overrides};

/// Monte Carlo estimation of average gate fidelity.
///
/// Exit codes: 1 malformed config, 2 infeasible size, 3 internal
/// self-check failure, 4 I/O error.
#[derive(Debug, Parser)]
#[command(name = "gatefid", version)]
struct Args {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for report.json and the CSV file.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Overrides the mode: estimate, resources or distribution-dump.
    #[arg(long)]
    mode: Option<String>,
}

fn run(args: &Args) -> Result<(), CliError> {
    let overrides = Overrides {
        seed: args.seed,
        mode: args.mode.as_deref().map(Mode::parse).transpose()?,
        threads: args.threads,
    };
    let outcome = run_file(&args.config, &args.out, &overrides)?;
    print!("{}", outcome.summary);
    println!("wrote {}", outcome.report.display());
    if let Some(csv) = outcome.csv {
        println!("wrote {}", csv.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gatefid: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
