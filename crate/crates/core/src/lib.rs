//! Cavity-induced quantum interference in a Lambda-type three-level atom.
//!
//! The atom (ground doublet `|0>`, `|1>`, excited `|2>`) couples to one
//! thermal, damped cavity mode. The crate builds the reduced atomic
//! generators, the full atom-cavity generator on a truncated Fock space, and
//! solves them for dynamics, steady states and probe absorption spectra.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cavity;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod expm;
pub mod model;
pub mod ode;
pub mod superop;
pub mod validation;

pub use analysis::{
    absorption_spectrum, detuning_sweep, inversion_boundaries, sa_transform, sideband_linewidths, ProbeWeights,
    SABasis, SpectrumResult, SweepResult,
};
pub use cavity::{build_full_liouvillian, reduce_to_atom, FockConfig};
pub use density::DensityMatrix;
pub use dynamics::{
    asymptotic_state, correlation_transform, evolve, evolve_sparse, steady_state, steady_state_sparse,
    CorrelationSolver, SolverConfig, SteadyStateReport,
};
pub use error::{Error, Result};
pub use model::{
    build_approx_liouvillian, build_approx_liouvillian_with, build_reduced_liouvillian, effective_rates,
    response_function, Branch, ComplexRate, DecayRates, Generator, ModelParams,
};
pub use ode::OdeTolerance;
pub use superop::{CMatrix, CVector, SparseSuperoperator, Superoperator};

#[cfg(test)]
pub(crate) mod testutil;
