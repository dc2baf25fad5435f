use num_complex::Complex64;
use rayon::prelude::*;

use crate::density::DensityMatrix;
use crate::dynamics::evolve;
use crate::error::{Error, Result};
use crate::model::{DecayRates, Generator, ModelParams};
use crate::superop::{CMatrix, Superoperator};

/// Unitary whose columns are `|S>`, `|A>`, `|2>` in the bare basis.
///
/// `|S>` is proportional to `sqrt(gamma0) e^{i phi0} |0> + sqrt(gamma1)
/// e^{i phi1} |1>` with `phi_i = arg g_i`, and `|A>` is the orthogonal
/// combination annihilated by the coupling to `|2>`. For real couplings this
/// reduces to `(sqrt(gamma0)|1> - sqrt(gamma1)|0>) / sqrt(gamma0 + gamma1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SABasis {
    unitary: CMatrix,
}

impl SABasis {
    /// Basis built from the bad-cavity rates `|g_i|^2 / kappa`.
    pub fn new(params: &ModelParams) -> Result<Self> {
        Self::with_rates(params, DecayRates::BadCavity)
    }

    pub fn with_rates(params: &ModelParams, rates: DecayRates) -> Result<Self> {
        let (gamma0, gamma1) = rates.rates(params)?;
        let total = gamma0 + gamma1;
        if !(total > 0.0) {
            return Err(Error::param("g0, g1", "gamma0 + gamma1 must be > 0"));
        }
        let phase = |g: Complex64| if g.norm() > 0.0 { g / g.norm() } else { Complex64::new(1.0, 0.0) };
        let s0 = phase(params.g0) * (gamma0 / total).sqrt();
        let s1 = phase(params.g1) * (gamma1 / total).sqrt();
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        #[rustfmt::skip]
        let unitary = CMatrix::from_row_slice(3, 3, &[
            s0, -s1.conj(), zero,
            s1, s0.conj(), zero,
            zero, zero, one,
        ]);
        Ok(Self { unitary })
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    /// `U^dag rho U`, ordered `(S, A, 2)`.
    pub fn transform_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        rho.in_basis(&self.unitary)
    }

    pub fn transform_generator(&self, l: &Superoperator) -> Result<Superoperator> {
        l.transformed(&self.unitary)
    }
}

pub fn sa_transform(params: &ModelParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    SABasis::new(params)?.transform_state(rho)
}

/// Populations in the `(S, A, 2)` basis at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapRow {
    pub t: f64,
    pub p22: f64,
    pub p_ss: f64,
    pub p_aa: f64,
}

/// Evolves `rho0` and reports `S`/`A`/`2` populations at each time.
pub fn trap_series(
    params: &ModelParams,
    generator: Generator,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Vec<TrapRow>> {
    let l = generator.build(params)?;
    let basis = SABasis::new(params)?;
    times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let rho = evolve(&l, rho0, t)
                .and_then(|r| basis.transform_state(&r))
                .map_err(|e| Error::at(i, t, e))?;
            Ok(TrapRow {
                t,
                p22: rho.population(2),
                p_ss: rho.population(0),
                p_aa: rho.population(1),
            })
        })
        .collect()
}
