//! Configuration, dispatch and CSV output for the `lambda-cavity` binary.

pub mod config;
pub mod csv;
mod run;

pub use config::{parse_config, ConfigError, Mode, RawConfig, RunConfig};
pub use run::{produce, run, Report, RunError, SPECTRUM_HEADER, STEADY_HEADER, SWEEP_HEADER, TRAP_HEADER};

/// Environment variable capping the worker threads of grid computations.
pub const THREADS_ENV: &str = "LAMBDA_CAVITY_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`]; 0 or unset keeps the
/// default.
pub fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV}={value} is not a thread count"))?;
    if n == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}
