use num_complex::Complex64;
use rayon::prelude::*;

use crate::density::DensityMatrix;
use crate::dynamics::{steady_state, CorrelationSolver};
use crate::error::{Error, Result};
use crate::model::{sigma, Generator, ModelParams};
use crate::superop::{CMatrix, Superoperator};

/// Probe dipole weights on the `0 <-> 2` and `1 <-> 2` transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeWeights {
    pub mu0: f64,
    pub mu1: f64,
}

impl Default for ProbeWeights {
    fn default() -> Self {
        Self { mu0: 1.0, mu1: 1.0 }
    }
}

impl ProbeWeights {
    /// Raising part `mu0 A20 + mu1 A21` of the probe dipole.
    pub fn raising(&self) -> CMatrix {
        sigma(2, 0) * Complex64::new(self.mu0, 0.0) + sigma(2, 1) * Complex64::new(self.mu1, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub omega: f64,
    pub a_on: f64,
    pub a_off: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumColumn {
    On,
    Off,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumResult {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumResult {
    pub fn omegas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.omega).collect()
    }

    pub fn column(&self, which: SpectrumColumn) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match which {
                SpectrumColumn::On => r.a_on,
                SpectrumColumn::Off => r.a_off,
            })
            .collect()
    }
}

fn probe_correlations(
    solver: &CorrelationSolver,
    rho: &DensityMatrix,
    weights: ProbeWeights,
    omega: f64,
) -> Result<Complex64> {
    let plus = weights.raising();
    let minus = plus.adjoint();
    let forward = solver.correlation(&minus, &plus, rho, omega)?;
    let backward = solver.reversed_correlation(&minus, &plus, rho, omega)?;
    Ok(forward - backward)
}

/// Absorption of a weak probe by the stationary state `rho` of `l`:
/// `Re[C(P-, P+) - C'(P+, P-)]` where `C` transforms `<P-(tau) P+(0)>` and
/// `C'` transforms `<P+(0) P-(tau)>`.
pub fn absorption(
    l: &Superoperator,
    rho: &DensityMatrix,
    weights: ProbeWeights,
    omegas: &[f64],
) -> Result<Vec<f64>> {
    let solver = CorrelationSolver::new(l)?;
    solver.check_stationary(rho)?;
    omegas
        .par_iter()
        .enumerate()
        .map(|(i, &w)| {
            probe_correlations(&solver, rho, weights, w)
                .map(|z| z.re)
                .map_err(|e| Error::at(i, w, e))
        })
        .collect()
}

/// Spectrum with the cross terms at `params.interference` (`a_on`) and
/// switched off (`a_off`), each against its own steady state.
pub fn absorption_spectrum(
    params: &ModelParams,
    generator: Generator,
    weights: ProbeWeights,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    let column = |p: &ModelParams| -> Result<Vec<f64>> {
        let l = generator.build(p)?;
        let rho = steady_state(&l)?.unique()?;
        absorption(&l, &rho, weights, omegas)
    };
    let on = column(params)?;
    let off = column(&params.with_interference(0.0))?;
    Ok(SpectrumResult {
        rows: omegas
            .iter()
            .zip(on.iter().zip(&off))
            .map(|(&omega, (&a_on, &a_off))| SpectrumRow { omega, a_on, a_off })
            .collect(),
    })
}

/// Largest mismatch between the probe correlation difference `X(w)` and
/// `conj` of the same quantity computed from the adjoint correlations at
/// `-w`. Both sides are equal in exact arithmetic, so this bounds the
/// numerical error of the real part reported by [`absorption`].
pub fn reality_residual(
    l: &Superoperator,
    rho: &DensityMatrix,
    weights: ProbeWeights,
    omegas: &[f64],
) -> Result<f64> {
    let solver = CorrelationSolver::new(l)?;
    let plus = weights.raising();
    let minus = plus.adjoint();
    let mut worst = 0.0f64;
    for &w in omegas {
        let x = probe_correlations(&solver, rho, weights, w)?;
        let mirrored = solver.reversed_correlation(&plus, &minus, rho, -w)? - solver.correlation(&plus, &minus, rho, -w)?;
        worst = worst.max((x - mirrored.conj()).norm());
    }
    Ok(worst)
}
