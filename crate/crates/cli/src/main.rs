use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use leapwave_cli::{help_text, parse_kv, run_experiment, Experiment, RunConfig, EXPERIMENTS};

#[derive(Parser, Debug)]
#[command(name = "leapwave", version, about = "Travelling waves of the 5-point leapfrog scheme", after_help = help_text())]
struct Args {
    /// One of: mckean-front, mckean-periodic, sawtooth, smooth-newton,
    /// continuation, bea-ladder, bea-contour, resonance-compare,
    /// pde-transport, steady-state
    #[arg(value_parser = parse_experiment)]
    experiment: Experiment,
    /// Flat key=value file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override one key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads for parallel sweeps
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = EXPERIMENTS.iter().map(|e| e.name()).collect();
        format!("unknown experiment '{s}' (expected one of {})", names.join(", "))
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = (|| -> anyhow::Result<RunConfig> {
        let file = match &args.config {
            Some(p) => parse_kv(&std::fs::read_to_string(p).map_err(|e| anyhow::anyhow!("reading {}: {e}", p.display()))?)?,
            None => Vec::new(),
        };
        let overrides = parse_kv(&args.set.join("\n"))?;
        if args.threads == Some(0) {
            anyhow::bail!("--threads must be at least 1");
        }
        RunConfig::resolve(args.experiment, &file, &overrides)
    })();
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("invalid configuration: {e:#}");
            return ExitCode::from(2);
        }
    };
    match run_experiment(&cfg, &args.out, args.threads) {
        Ok(o) => match o.error {
            None => {
                println!("{} done; manifest at {}", cfg.experiment.name(), o.manifest_path.display());
                ExitCode::SUCCESS
            }
            Some(e) => {
                eprintln!("{} failed: {e} (manifest at {})", cfg.experiment.name(), o.manifest_path.display());
                ExitCode::FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
