//! Physics-level analyses built on the solvers: the symmetric/antisymmetric
//! basis, detuning sweeps and inversion boundaries, probe absorption spectra
//! and their Lorentzian linewidths.

mod basis;
mod fit;
mod spectrum;
mod sweep;

pub use basis::{sa_transform, trap_series, SABasis, TrapRow};
pub use fit::{fit_lorentzian, sideband_linewidths, LorentzianFit, SidebandWidths, FIT_WINDOW};
pub use spectrum::{
    absorption, absorption_spectrum, reality_residual, ProbeWeights, SpectrumColumn, SpectrumResult, SpectrumRow,
};
pub use sweep::{
    detuning_sweep, inversion_boundaries, linear_grid, steady_row, Difference, SweepResult, SweepRow,
    BOUNDARY_TOLERANCE,
};
