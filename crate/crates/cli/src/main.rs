use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use steklov_cli::{dispatch, exit_code, parse_config, Command, Format, Invocation, RunError};

/// Steklov and Steklov-Dirichlet spectra of perforated planar domains.
#[derive(Debug, Parser)]
#[command(name = "steklov", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file.
    config: PathBuf,
    /// Table format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write SVG line charts.
    #[arg(long)]
    plots: bool,
}

fn init_threads() {
    let Ok(value) = std::env::var("STEKLOV_THREADS") else {
        return;
    };
    match value.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not size thread pool: {e}");
            }
        }
        _ => eprintln!("warning: ignoring STEKLOV_THREADS={value:?}"),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    init_threads();
    let result = std::fs::read_to_string(&args.config)
        .map_err(|source| RunError::Io { path: args.config.clone(), source })
        .and_then(|text| Ok(parse_config(&text)?))
        .and_then(|config| {
            dispatch(&config, &Invocation { command: args.command, format: args.format, plots: args.plots })
        });
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result))
}
