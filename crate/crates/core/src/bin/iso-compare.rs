use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use iso_compare::cli::{self, CliError};

/// Isoperimetric-profile volume comparison on warped-product models.
#[derive(Debug, Parser)]
#[command(name = "iso-compare", version)]
struct Args {
    /// profile, variation-check, mass, bishop-bound, football-alpha,
    /// epsilon0, monotonicity, cutoff-budget or cylinder-growth
    command: String,

    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,

    /// write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// lo:hi:count
    #[arg(long)]
    eps_grid: Option<String>,

    #[arg(long)]
    method: Option<String>,

    #[arg(long)]
    case: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,

    /// extra key=value settings, overriding the config file
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

enum Failure {
    Cli(CliError),
    Io(anyhow::Error),
}

fn overrides(args: &Args) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (key, v) in [
        ("output", args.out.as_ref().map(|p| p.display().to_string())),
        ("format", args.format.clone()),
        ("eps_grid", args.eps_grid.clone()),
        ("method", args.method.clone()),
        ("case", args.case.clone()),
        ("lambda", args.lambda.clone()),
    ] {
        if let Some(v) = v {
            out.push((key.to_string(), v));
        }
    }
    for s in &args.set {
        let (k, v) = s.split_once('=').ok_or_else(|| CliError::Config {
            line: None,
            message: format!("`--set {s}` is not key=value"),
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn run(args: &Args) -> Result<(), Failure> {
    if let Ok(t) = std::env::var("ISO_COMPARE_THREADS") {
        let threads: usize = t
            .parse()
            .map_err(|_| Failure::Io(anyhow::anyhow!("ISO_COMPARE_THREADS=`{t}` is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Io(e.into()))?;
    }
    let text = match &args.config {
        Some(p) => std::fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))
            .map_err(Failure::Io)?,
        None => String::new(),
    };
    let ov = overrides(args).map_err(Failure::Cli)?;
    let (cfg, rendered) = cli::run_text(&args.command, &text, &ov).map_err(Failure::Cli)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Io)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Cli(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
