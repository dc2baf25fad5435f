//! Atom plus thermal cavity mode on a truncated Fock space.
//!
//! Composite index ordering is `atom + 3 n` (the atom is the fast index),
//! i.e. operators are `field (x) atom`.

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::dynamics::{evolve, evolve_sparse};
use crate::error::{Error, Result};
use crate::model::{atomic_hamiltonian, build_reduced_liouvillian, sigma, ModelParams, ATOM_DIM};
use crate::ode::OdeTolerance;
use crate::superop::{CMatrix, SparseBuilder, SparseSuperoperator, TermSink};

/// Largest composite superoperator row dimension accepted by the builder.
pub const MAX_SUPEROPERATOR_ROWS: usize = 1_000_000;

/// Photon-number truncation of the cavity mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub n_max: usize,
    /// Largest admissible thermal occupation of level `n_max`.
    pub tail_tolerance: f64,
}

impl FockConfig {
    pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-5;

    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            tail_tolerance: Self::DEFAULT_TAIL_TOLERANCE,
        }
    }

    /// Smallest `n_max >= 4 nbar + 4` whose top-level thermal weight is
    /// below `tail_tolerance`.
    pub fn auto(nbar: f64, tail_tolerance: f64) -> Result<Self> {
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::param("nbar", format!("must be finite and >= 0, got {nbar}")));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::param("tail_tolerance", format!("must lie in (0, 1), got {tail_tolerance}")));
        }
        let mut n_max = (4.0 * nbar + 4.0).ceil() as usize;
        while thermal_weight(nbar, n_max) >= tail_tolerance {
            n_max += 1;
        }
        let cfg = Self { n_max, tail_tolerance };
        cfg.check_size()?;
        Ok(cfg)
    }

    /// Hilbert-space dimension of atom plus field.
    pub fn composite_dim(&self) -> usize {
        ATOM_DIM * (self.n_max + 1)
    }

    pub fn validate(&self, nbar: f64) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::param("n_max", "must be >= 1"));
        }
        let weight = thermal_weight(nbar, self.n_max);
        if !(weight < self.tail_tolerance) {
            return Err(Error::Truncation {
                n_max: self.n_max,
                weight,
                tolerance: self.tail_tolerance,
            });
        }
        self.check_size()
    }

    fn check_size(&self) -> Result<()> {
        let rows = self.composite_dim().pow(2);
        if rows > MAX_SUPEROPERATOR_ROWS {
            return Err(Error::param(
                "n_max",
                format!("{} gives {rows} superoperator rows, limit {MAX_SUPEROPERATOR_ROWS}", self.n_max),
            ));
        }
        Ok(())
    }
}

/// Thermal occupation `N^n / (N + 1)^(n + 1)` of Fock level `n`.
pub fn thermal_weight(nbar: f64, n: usize) -> f64 {
    let q = nbar / (nbar + 1.0);
    q.powi(n as i32) / (nbar + 1.0)
}

/// Thermal field state truncated at `n_max` and renormalized.
pub fn thermal_field(nbar: f64, n_max: usize) -> DensityMatrix {
    let weights: Vec<f64> = (0..=n_max).map(|n| thermal_weight(nbar, n)).collect();
    let total: f64 = weights.iter().sum();
    let diag = weights.iter().map(|w| Complex64::new(w / total, 0.0));
    DensityMatrix::from_evolved(CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n_max + 1, diag)))
        .expect("diagonal probability vector is a valid state")
}

/// Truncated annihilation operator.
pub fn annihilation(n_max: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `field (x) atom` embedding of a pair of operators.
fn embed(field: &CMatrix, atom: &CMatrix) -> CMatrix {
    field.kronecker(atom)
}

/// Generator of the atom coupled to a damped thermal mode: Hamiltonian part
/// `H_A + delta a^dag a + i (S a^dag - S^dag a)` with
/// `S = g0 A02 + g1 A12`, and cavity damping at rates `kappa (N + 1)`
/// (emission) and `kappa N` (absorption).
pub fn build_full_liouvillian(params: &ModelParams, fock: &FockConfig) -> Result<SparseSuperoperator> {
    params.validate()?;
    fock.validate(params.nbar)?;
    let nf = fock.n_max + 1;
    let id_f = CMatrix::identity(nf, nf);
    let id_a = CMatrix::identity(ATOM_DIM, ATOM_DIM);
    let a = annihilation(fock.n_max);
    let ad = a.adjoint();

    let s = sigma(0, 2) * params.g0 + sigma(1, 2) * params.g1;
    let i = Complex64::new(0.0, 1.0);
    let h_int = (embed(&ad, &s) - embed(&a, &s.adjoint())) * i;
    let h = embed(&id_f, &atomic_hamiltonian(params.omega10))
        + embed(&(&ad * &a), &id_a) * Complex64::new(params.delta, 0.0)
        + h_int;

    let mut b = SparseBuilder::new(fock.composite_dim());
    b.commutator(&h);
    b.lindblad(&embed(&a, &id_a), params.kappa * (params.nbar + 1.0));
    b.lindblad(&embed(&ad, &id_a), params.kappa * params.nbar);
    Ok(b.finish())
}

/// Partial trace over the field.
pub fn reduce_to_atom(rho_full: &DensityMatrix) -> Result<DensityMatrix> {
    let d = rho_full.dim();
    if !d.is_multiple_of(ATOM_DIM) || d < ATOM_DIM {
        return Err(Error::DimensionMismatch {
            expected: ATOM_DIM * (d / ATOM_DIM).max(1),
            found: d,
        });
    }
    let m = rho_full.matrix();
    let reduced = CMatrix::from_fn(ATOM_DIM, ATOM_DIM, |i, j| {
        (0..d / ATOM_DIM).map(|n| m[(i + ATOM_DIM * n, j + ATOM_DIM * n)]).sum()
    });
    DensityMatrix::new(reduced)
}

/// Mean photon number of a composite state.
pub fn photon_number(rho_full: &DensityMatrix) -> Result<f64> {
    let d = rho_full.dim();
    if !d.is_multiple_of(ATOM_DIM) {
        return Err(Error::DimensionMismatch {
            expected: ATOM_DIM * (d / ATOM_DIM).max(1),
            found: d,
        });
    }
    let m = rho_full.matrix();
    Ok((0..d).map(|k| (k / ATOM_DIM) as f64 * m[(k, k)].re).sum())
}

/// Trace distance at time `t` between the reduced atomic state of the full
/// model, started from `atom0 (x) thermal`, and the reduced generator's
/// evolution of `atom0`.
pub fn transient_distance(
    params: &ModelParams,
    fock: &FockConfig,
    atom0: &DensityMatrix,
    t: f64,
    tol: OdeTolerance,
) -> Result<f64> {
    let full = build_full_liouvillian(params, fock)?;
    let rho0 = thermal_field(params.nbar, fock.n_max).tensor(atom0);
    let exact = reduce_to_atom(&evolve_sparse(&full, &rho0, t, tol)?)?;
    let approx = evolve(&build_reduced_liouvillian(params)?, atom0, t)?;
    Ok(exact.trace_distance(&approx))
}
