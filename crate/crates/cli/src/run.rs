use std::fs;
use std::io::{self, Write};
use std::path::Path;

use lambda_cavity::analysis::{absorption_spectrum, detuning_sweep, trap_series};
use lambda_cavity::cavity::{build_full_liouvillian, reduce_to_atom, FockConfig};
use lambda_cavity::dynamics::{asymptotic_state, steady_state, steady_state_sparse};
use lambda_cavity::validation::run_all;
use lambda_cavity::{DensityMatrix, Error as ModelError, Generator};

use crate::config::{ConfigError, GeneratorChoice, Mode, Origin, RunConfig};
use crate::csv::table;

pub const SWEEP_HEADER: &str = "delta,d20,d21,re_coh,im_coh,p22,p11,p00";
pub const SPECTRUM_HEADER: &str = "omega,a_on,a_off";
pub const TRAP_HEADER: &str = "t,p22,pSS,pAA";
pub const STEADY_HEADER: &str = "p22,p11,p00,re_coh,im_coh,kernel_dimension,spectral_gap";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("solver error: {0}")]
    Solver(#[from] ModelError),
    #[error("validation failed for criteria {0:?}")]
    Validation(Vec<usize>),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Io(_) => 1,
            RunError::Config(_) => 2,
            RunError::Solver(_) => 3,
            RunError::Validation(_) => 4,
        }
    }
}

/// Text produced by a run, plus the failing criteria of a validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub failed: Vec<usize>,
}

fn atomic(config: &RunConfig, mode: &str) -> Result<Generator, RunError> {
    match config.generator {
        GeneratorChoice::Atomic(g) => Ok(g),
        GeneratorChoice::Full => Err(ConfigError {
            key: "generator".into(),
            origin: Origin::Default,
            message: format!("`full` is only available in steady mode, not {mode}"),
        }
        .into()),
    }
}

fn steady_line(rho: &DensityMatrix, kernel_dimension: usize, gap: f64) -> String {
    let coh = rho.get(0, 1);
    let row = [
        rho.population(2),
        rho.population(1),
        rho.population(0),
        coh.re,
        coh.im,
        kernel_dimension as f64,
        gap,
    ];
    table(STEADY_HEADER, [&row[..]])
}

/// Computes the output of `mode` without writing it anywhere.
pub fn produce(config: &RunConfig, mode: Mode) -> Result<Report, RunError> {
    let p = &config.params;
    let body = match mode {
        Mode::Steady => match config.generator {
            GeneratorChoice::Atomic(g) => {
                let l = g.build(p)?;
                let report = steady_state(&l)?;
                let rho = match report.state {
                    Some(rho) => rho,
                    None => asymptotic_state(&l, &config.initial_state.resolve(p)?)?,
                };
                steady_line(&rho, report.kernel_dimension, report.spectral_gap)
            }
            GeneratorChoice::Full => {
                let fock = match config.n_max {
                    Some(n) => FockConfig::new(n),
                    None => FockConfig::auto(p.nbar, FockConfig::DEFAULT_TAIL_TOLERANCE)?,
                };
                let full = build_full_liouvillian(p, &fock)?;
                let rho = reduce_to_atom(&steady_state_sparse(&full)?)?;
                steady_line(&rho, 1, f64::NAN)
            }
        },
        Mode::Sweep => {
            let sweep = detuning_sweep(p, atomic(config, "sweep")?, &config.delta_grid.points())?;
            let rows: Vec<[f64; 8]> = sweep
                .rows
                .iter()
                .map(|r| [r.delta, r.d20, r.d21, r.re_coh, r.im_coh, r.p22, r.p11, r.p00])
                .collect();
            table(SWEEP_HEADER, rows.iter().map(|r| &r[..]))
        }
        Mode::Spectrum => {
            let s = absorption_spectrum(p, atomic(config, "spectrum")?, config.probe, &config.omega_grid.points())?;
            let rows: Vec<[f64; 3]> = s.rows.iter().map(|r| [r.omega, r.a_on, r.a_off]).collect();
            table(SPECTRUM_HEADER, rows.iter().map(|r| &r[..]))
        }
        Mode::Trap => {
            let rho0 = config.initial_state.resolve(p)?;
            let series = trap_series(p, atomic(config, "trap")?, &rho0, &config.time_grid.points())?;
            let rows: Vec<[f64; 4]> = series.iter().map(|r| [r.t, r.p22, r.p_ss, r.p_aa]).collect();
            table(TRAP_HEADER, rows.iter().map(|r| &r[..]))
        }
        Mode::Validate => {
            let outcomes = run_all();
            let mut body = String::new();
            let mut failed = Vec::new();
            for o in &outcomes {
                body.push_str(&o.report_line());
                body.push('\n');
                if !o.passed {
                    failed.push(o.id);
                }
            }
            return Ok(Report { body, failed });
        }
    };
    Ok(Report {
        body,
        failed: Vec::new(),
    })
}

/// Runs `mode` and writes its output to `out`, or stdout when `None`.
pub fn run(config: &RunConfig, mode: Mode, out: Option<&Path>) -> Result<(), RunError> {
    let report = produce(config, mode)?;
    match out {
        Some(path) => fs::write(path, &report.body)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(report.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    if report.failed.is_empty() {
        Ok(())
    } else {
        Err(RunError::Validation(report.failed))
    }
}
