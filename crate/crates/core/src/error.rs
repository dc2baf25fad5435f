use thiserror::Error;

/// Errors raised by model construction and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("Fock truncation n_max = {n_max} leaves thermal weight {weight:.3e} on the top level (tolerance {tolerance:.3e})")]
    Truncation {
        n_max: usize,
        weight: f64,
        tolerance: f64,
    },

    #[error("kernel contains no unit-trace element; generator is not trace preserving")]
    NoUnitTraceKernel,

    #[error("steady state is not unique (kernel dimension {0}); use the asymptotic state")]
    DegenerateKernel(usize),

    #[error("zero eigenvalue is defective (overlap condition {0:.3e})")]
    DefectiveKernel(f64),

    #[error("generator has {0} non-decaying oscillatory mode(s); no asymptotic limit")]
    NonDecaying(usize),

    #[error("resolvent is singular: kernel component {0:.3e} of the source does not decay")]
    SingularResolvent(f64),

    #[error("linear solve failed: {0}")]
    Singular(&'static str),

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("no sign change of the population difference in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("Lorentzian fit failed: {0}")]
    FitFailed(String),

    #[error("sidebands not resolved: separation {separation:.3} < 3 x summed half-widths {widths:.3}")]
    Unresolved { separation: f64, widths: f64 },

    #[error("at grid point {index} (x = {x}): {source}")]
    AtPoint {
        index: usize,
        x: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn at(index: usize, x: f64, source: Error) -> Self {
        Error::AtPoint {
            index,
            x,
            source: Box::new(source),
        }
    }
}
