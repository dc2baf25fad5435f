use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lambda_cavity_cli::{configure_threads, run, Mode, RawConfig, RunError};

/// Steady states, detuning sweeps, probe spectra and trapping dynamics of a
/// Lambda atom in a thermal cavity.
#[derive(Parser, Debug)]
#[command(name = "lambda-cavity", version)]
struct Cli {
    /// steady | sweep | spectrum | trap | validate
    mode: Mode,
    /// Flat key=value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (default: `output` key, else stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a config key, e.g. --set delta=50
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn load(cli: &Cli) -> Result<lambda_cavity_cli::RunConfig, RunError> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path)?,
        None => String::new(),
    };
    let mut raw = RawConfig::parse(&text)?;
    for s in &cli.set {
        raw.set(s)?;
    }
    Ok(raw.resolve()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = load(&cli).and_then(|config| {
        let out = cli.out.clone().or_else(|| config.output.clone().map(PathBuf::from));
        run(&config, cli.mode, out.as_deref())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
