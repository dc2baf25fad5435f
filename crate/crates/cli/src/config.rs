//! Flat `key = value` run configuration.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use lambda_cavity::analysis::{linear_grid, ProbeWeights, SABasis};
use lambda_cavity::{CMatrix, DecayRates, DensityMatrix, Error as ModelError, FockConfig, Generator, ModelParams};
use num_complex::Complex64;

/// Where a key was set: a config file line or a `--set` override.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override,
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override => f.write_str("--set"),
            Origin::Default => f.write_str("default"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}: `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub origin: Origin,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, origin: Origin, message: impl Into<String>) -> Self {
        Self {
            key: key.to_string(),
            origin,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Steady,
    Sweep,
    Spectrum,
    Trap,
    Validate,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "steady" => Ok(Mode::Steady),
            "sweep" => Ok(Mode::Sweep),
            "spectrum" => Ok(Mode::Spectrum),
            "trap" => Ok(Mode::Trap),
            "validate" => Ok(Mode::Validate),
            other => Err(format!("unknown mode `{other}` (steady, sweep, spectrum, trap, validate)")),
        }
    }
}

/// Generator used by a run; `Full` adds the cavity mode (steady mode only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorChoice {
    Atomic(Generator),
    Full,
}

impl FromStr for GeneratorChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "reduced" => Ok(GeneratorChoice::Atomic(Generator::Reduced)),
            "approx" => Ok(GeneratorChoice::Atomic(Generator::Approximate(DecayRates::BadCavity))),
            "approx-response" => Ok(GeneratorChoice::Atomic(Generator::Approximate(DecayRates::ResponseFunction))),
            "approx-printed" => Ok(GeneratorChoice::Atomic(Generator::Approximate(DecayRates::FullSplitting))),
            "full" => Ok(GeneratorChoice::Full),
            other => Err(format!(
                "unknown generator `{other}` (reduced, approx, approx-response, approx-printed, full)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linear_grid(self.start, self.stop, self.count)
    }
}

/// Initial atomic state as written in the config.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Ket(usize),
    Symmetric,
    Antisymmetric,
    Matrix(CMatrix),
}

impl InitialState {
    pub fn resolve(&self, params: &ModelParams) -> Result<DensityMatrix, ModelError> {
        match self {
            InitialState::Ket(k) => Ok(DensityMatrix::basis(3, *k)),
            InitialState::Symmetric | InitialState::Antisymmetric => {
                let col = usize::from(matches!(self, InitialState::Antisymmetric));
                let basis = SABasis::new(params)?;
                DensityMatrix::pure(&basis.unitary().column(col).into_owned())
            }
            InitialState::Matrix(m) => DensityMatrix::normalized(m.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub params: ModelParams,
    pub generator: GeneratorChoice,
    pub delta_grid: Grid,
    pub omega_grid: Grid,
    pub time_grid: Grid,
    pub initial_state: InitialState,
    pub probe: ProbeWeights,
    /// Photon cutoff of the full model; `None` selects it from `nbar`.
    pub n_max: Option<usize>,
    pub output: Option<String>,
}

const KEYS: &[&str] = &[
    "mode",
    "g0",
    "g1",
    "kappa",
    "omega10",
    "delta",
    "nbar",
    "interference",
    "generator",
    "delta_start",
    "delta_stop",
    "delta_count",
    "omega_start",
    "omega_stop",
    "omega_count",
    "t_stop",
    "t_count",
    "initial_state",
    "mu0",
    "mu1",
    "n_max",
    "output",
];

/// Raw key/value pairs with their origin.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: HashMap<String, (String, Origin)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let origin = Origin::Line(i + 1);
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(line, origin, "expected `key = value`"));
            };
            let key = key.trim();
            if raw.entries.contains_key(key) {
                return Err(ConfigError::new(key, origin, "duplicate key"));
            }
            raw.insert(key, value.trim(), origin)?;
        }
        Ok(raw)
    }

    /// Applies a `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(ConfigError::new(assignment, Origin::Override, "expected `key=value`"));
        };
        self.insert(key.trim(), value.trim(), Origin::Override)
    }

    fn insert(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::new(key, origin, "unknown key"));
        }
        self.entries.insert(key.to_string(), (value.to_string(), origin));
        Ok(())
    }

    fn origin(&self, key: &str) -> Origin {
        self.entries.get(key).map_or(Origin::Default, |e| e.1)
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, origin)) => parse(v).map(Some).map_err(|m| ConfigError::new(key, *origin, m)),
        }
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key, parse_real)
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key, |v| v.parse::<usize>().map_err(|e| format!("`{v}` is not a count: {e}")))
    }

    /// Validates everything and fills in defaults.
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let defaults = ModelParams::default();
        let params = ModelParams {
            g0: self.get("g0", parse_complex)?.unwrap_or(defaults.g0),
            g1: self.get("g1", parse_complex)?.unwrap_or(defaults.g1),
            kappa: self.number("kappa")?.unwrap_or(defaults.kappa),
            omega10: self.number("omega10")?.unwrap_or(defaults.omega10),
            delta: self.number("delta")?.unwrap_or(defaults.delta),
            nbar: self.number("nbar")?.unwrap_or(defaults.nbar),
            interference: self.number("interference")?.unwrap_or(defaults.interference),
        };
        if let Err(e) = params.validate() {
            let key = match &e {
                ModelError::InvalidParameter { name, .. } => name.to_string(),
                _ => "params".to_string(),
            };
            let origin = self.origin(&key);
            return Err(ConfigError::new(&key, origin, e.to_string()));
        }

        let mode = self.get("mode", |v| v.parse())?;
        let generator = self.get("generator", |v| v.parse())?.unwrap_or(GeneratorChoice::Atomic(Generator::Reduced));

        let delta_grid = self.grid("delta", (-400.0, 400.0, 401))?;
        let half_span = if params.omega10 > 0.0 { 1.5 * params.omega10 } else { 3.0 * params.kappa };
        let omega_grid = self.grid("omega", (-half_span, half_span, 1201))?;
        let t_stop = self.number("t_stop")?.unwrap_or(10.0);
        if !(t_stop > 0.0) || !t_stop.is_finite() {
            return Err(ConfigError::new("t_stop", self.origin("t_stop"), "must be finite and > 0"));
        }
        let t_count = self.count("t_count")?.unwrap_or(101);
        if t_count < 2 {
            return Err(ConfigError::new("t_count", self.origin("t_count"), "must be >= 2"));
        }
        let time_grid = Grid {
            start: 0.0,
            stop: t_stop,
            count: t_count,
        };

        let initial_state = self.get("initial_state", parse_initial_state)?.unwrap_or(InitialState::Ket(2));
        if let Err(e) = initial_state.resolve(&params) {
            return Err(ConfigError::new("initial_state", self.origin("initial_state"), e.to_string()));
        }

        let probe = ProbeWeights {
            mu0: self.number("mu0")?.unwrap_or(1.0),
            mu1: self.number("mu1")?.unwrap_or(1.0),
        };
        let n_max = match self.count("n_max")? {
            None | Some(0) => None,
            Some(n) => {
                if let Err(e) = FockConfig::new(n).validate(params.nbar) {
                    return Err(ConfigError::new("n_max", self.origin("n_max"), e.to_string()));
                }
                Some(n)
            }
        };
        let output = self.get("output", |v| Ok(v.to_string()))?.filter(|v| !v.is_empty());

        Ok(RunConfig {
            mode,
            params,
            generator,
            delta_grid,
            omega_grid,
            time_grid,
            initial_state,
            probe,
            n_max,
            output,
        })
    }

    fn grid(&self, prefix: &str, (start, stop, count): (f64, f64, usize)) -> Result<Grid, ConfigError> {
        let k_start = format!("{prefix}_start");
        let k_stop = format!("{prefix}_stop");
        let k_count = format!("{prefix}_count");
        let grid = Grid {
            start: self.number(&k_start)?.unwrap_or(start),
            stop: self.number(&k_stop)?.unwrap_or(stop),
            count: self.count(&k_count)?.unwrap_or(count),
        };
        if grid.count < 2 {
            return Err(ConfigError::new(&k_count, self.origin(&k_count), "must be >= 2"));
        }
        if !(grid.start < grid.stop) {
            let key = if self.entries.contains_key(&k_stop) { k_stop } else { k_start };
            let origin = self.origin(&key);
            return Err(ConfigError::new(&key, origin, format!("need start < stop, got [{}, {}]", grid.start, grid.stop)));
        }
        Ok(grid)
    }
}

/// Parses a config file and resolves it.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RawConfig::parse(text)?.resolve()
}

fn parse_real(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|e| format!("`{v}` is not a number: {e}"))?;
    if !x.is_finite() {
        return Err(format!("`{v}` is not finite"));
    }
    Ok(x)
}

/// `a`, `bi`, `a+bi` or `a-bi`, with optional exponents.
pub fn parse_complex(v: &str) -> Result<Complex64, String> {
    let s: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("`{v}` is not a complex number");
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(&s).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k]).map_err(|_| err())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other).map_err(|_| err())?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_initial_state(v: &str) -> Result<InitialState, String> {
    match v {
        "ket0" => return Ok(InitialState::Ket(0)),
        "ket1" => return Ok(InitialState::Ket(1)),
        "ket2" => return Ok(InitialState::Ket(2)),
        "S" => return Ok(InitialState::Symmetric),
        "A" => return Ok(InitialState::Antisymmetric),
        _ => {}
    }
    let rows: Vec<&str> = v.split(';').collect();
    if rows.len() != 3 {
        return Err(format!(
            "`{v}`: expected ket0, ket1, ket2, S, A or three `;`-separated rows"
        ));
    }
    let mut entries = Vec::with_capacity(9);
    for row in rows {
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        if cells.len() != 3 {
            return Err(format!("row `{row}` must have three comma-separated entries"));
        }
        for cell in cells {
            entries.push(parse_complex(cell)?);
        }
    }
    Ok(InitialState::Matrix(CMatrix::from_row_slice(3, 3, &entries)))
}
