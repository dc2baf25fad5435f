//! Reduced atomic master equations for a Lambda atom whose two transitions
//! `|0> <-> |2>` and `|1> <-> |2>` share one damped thermal cavity mode.
//!
//! Basis order is `(|0>, |1>, |2>)` throughout. The frame rotates at the mean
//! transition frequency, so `H_A = (omega10 / 2)(|1><1| - |0><0|)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::superop::{matrix_unit, CMatrix, Superoperator, ONE};

/// Hilbert-space dimension of the atom.
pub const ATOM_DIM: usize = 3;

/// Physical parameters. All frequencies share one (angular) unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Coupling of `|0> <-> |2>`.
    pub g0: Complex64,
    /// Coupling of `|1> <-> |2>`.
    pub g1: Complex64,
    /// Cavity field decay rate.
    pub kappa: f64,
    /// Ground doublet splitting `E1 - E0`.
    pub omega10: f64,
    /// Cavity detuning from the mean atomic transition frequency.
    pub delta: f64,
    /// Mean thermal photon number of the reservoir.
    pub nbar: f64,
    /// Scale `p` applied to every cross-damping term `g_i g_j^*` (`i != j`).
    pub interference: f64,
}

impl Default for ModelParams {
    /// `g0 = g1 = 10`, `kappa = 100`, `omega10 = 200`, `N = 20`, resonant
    /// cavity, full interference.
    fn default() -> Self {
        Self {
            g0: Complex64::new(10.0, 0.0),
            g1: Complex64::new(10.0, 0.0),
            kappa: 100.0,
            omega10: 200.0,
            delta: 0.0,
            nbar: 20.0,
            interference: 1.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, "must be finite"))
            }
        };
        finite("g0", self.g0.re)?;
        finite("g0", self.g0.im)?;
        finite("g1", self.g1.re)?;
        finite("g1", self.g1.im)?;
        finite("kappa", self.kappa)?;
        finite("omega10", self.omega10)?;
        finite("delta", self.delta)?;
        finite("nbar", self.nbar)?;
        finite("interference", self.interference)?;
        if self.kappa <= 0.0 {
            return Err(Error::param("kappa", format!("must be > 0, got {}", self.kappa)));
        }
        if self.nbar < 0.0 {
            return Err(Error::param("nbar", format!("must be >= 0, got {}", self.nbar)));
        }
        if self.omega10 < 0.0 {
            return Err(Error::param("omega10", format!("must be >= 0, got {}", self.omega10)));
        }
        if !(0.0..=1.0).contains(&self.interference) {
            return Err(Error::param(
                "interference",
                format!("must lie in [0, 1], got {}", self.interference),
            ));
        }
        Ok(())
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_interference(mut self, p: f64) -> Self {
        self.interference = p;
        self
    }

    pub fn with_couplings(mut self, g0: f64, g1: f64) -> Self {
        self.g0 = Complex64::new(g0, 0.0);
        self.g1 = Complex64::new(g1, 0.0);
        self
    }

    /// Multiplies every frequency-like parameter by `s`.
    pub fn scaled(mut self, s: f64) -> Self {
        self.g0 *= s;
        self.g1 *= s;
        self.kappa *= s;
        self.omega10 *= s;
        self.delta *= s;
        self
    }

    /// Product `g0 g1^*` carrying the relative dipole phase.
    pub fn cross_coupling(&self) -> Complex64 {
        self.g0 * self.g1.conj()
    }
}

/// Which response-function branch: `F(+omega10)` or `F(-omega10)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Cavity response `F(+-omega10)`. Real part: decay, imaginary part: shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRate(pub Complex64);

impl ComplexRate {
    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn decay(self) -> f64 {
        self.0.re
    }

    pub fn shift(self) -> f64 {
        self.0.im
    }
}

/// `F(+-omega10) = 1 / (kappa + i (delta +- omega10 / 2))`.
pub fn response_function(params: &ModelParams, branch: Branch) -> Result<ComplexRate> {
    if !(params.kappa > 0.0) {
        return Err(Error::param("kappa", format!("must be > 0, got {}", params.kappa)));
    }
    let den = Complex64::new(params.kappa, params.delta + branch.sign() * params.omega10 / 2.0);
    Ok(ComplexRate(den.inv()))
}

/// Cavity-induced decay rates `(gamma0, gamma1) = (Re F(-omega10) |g0|^2,
/// Re F(+omega10) |g1|^2)`.
pub fn effective_rates(params: &ModelParams) -> Result<(f64, f64)> {
    params.validate()?;
    let fm = response_function(params, Branch::Minus)?;
    let fp = response_function(params, Branch::Plus)?;
    Ok((fm.decay() * params.g0.norm_sqr(), fp.decay() * params.g1.norm_sqr()))
}

/// How the approximate (Lindblad-form) generator chooses its decay rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecayRates {
    /// `gamma_i = |g_i|^2 / kappa`.
    #[default]
    BadCavity,
    /// `gamma_i` from [`effective_rates`].
    ResponseFunction,
    /// `gamma_i = kappa |g_i|^2 / (kappa^2 + (delta -+ omega10)^2)`, the full
    /// splitting in the denominator.
    FullSplitting,
}

impl DecayRates {
    pub fn rates(self, params: &ModelParams) -> Result<(f64, f64)> {
        params.validate()?;
        let (k, d, w) = (params.kappa, params.delta, params.omega10);
        let (n0, n1) = (params.g0.norm_sqr(), params.g1.norm_sqr());
        Ok(match self {
            DecayRates::BadCavity => (n0 / k, n1 / k),
            DecayRates::ResponseFunction => effective_rates(params)?,
            DecayRates::FullSplitting => (
                k * n0 / (k * k + (d - w).powi(2)),
                k * n1 / (k * k + (d + w).powi(2)),
            ),
        })
    }
}

/// Atomic transition operator `A_ij = |i><j|`.
pub fn sigma(i: usize, j: usize) -> CMatrix {
    matrix_unit(ATOM_DIM, i, j)
}

/// `H_A = (omega10 / 2)(A11 - A00)`.
pub fn atomic_hamiltonian(omega10: f64) -> CMatrix {
    (sigma(1, 1) - sigma(0, 0)) * Complex64::new(omega10 / 2.0, 0.0)
}

/// Generator obtained after eliminating the cavity mode, keeping the complex
/// response `F(+-omega10)` (decay and level shifts) and the cross-damping
/// terms scaled by `params.interference`.
pub fn build_reduced_liouvillian(params: &ModelParams) -> Result<Superoperator> {
    params.validate()?;
    let fm = response_function(params, Branch::Minus)?.value();
    let fp = response_function(params, Branch::Plus)?.value();
    let n = params.nbar;
    let g0sq = Complex64::new(params.g0.norm_sqr(), 0.0);
    let g1sq = Complex64::new(params.g1.norm_sqr(), 0.0);
    let c01 = params.cross_coupling() * params.interference;
    let c10 = c01.conj();
    let a = sigma;

    // the bracketed terms; the full generator adds their Hermitian partner
    let mut x = Superoperator::zeros(ATOM_DIM);

    // emission, F(-omega10)(N + 1)
    let e0 = fm * (n + 1.0);
    x.add_sandwich(&a(0, 2), &a(2, 0), e0 * g0sq);
    x.add_left(&a(2, 2), -e0 * g0sq);
    x.add_sandwich(&a(0, 2), &a(2, 1), e0 * c01);

    // emission, F(+omega10)(N + 1)
    let e1 = fp * (n + 1.0);
    x.add_sandwich(&a(1, 2), &a(2, 1), e1 * g1sq);
    x.add_left(&a(2, 2), -e1 * g1sq);
    x.add_sandwich(&a(1, 2), &a(2, 0), e1 * c10);

    // absorption, F(-omega10) N
    let b0 = fm * n;
    x.add_sandwich(&a(2, 0), &a(0, 2), b0 * g0sq);
    x.add_right(&a(0, 0), -b0 * g0sq);
    x.add_sandwich(&a(2, 1), &a(0, 2), b0 * c01);
    x.add_right(&a(0, 1), -b0 * c01);

    // absorption, F(+omega10) N
    let b1 = fp * n;
    x.add_sandwich(&a(2, 1), &a(1, 2), b1 * g1sq);
    x.add_right(&a(1, 1), -b1 * g1sq);
    x.add_sandwich(&a(2, 0), &a(1, 2), b1 * c10);
    x.add_right(&a(1, 0), -b1 * c10);

    let mut l = Superoperator::zeros(ATOM_DIM);
    l.add_commutator(&atomic_hamiltonian(params.omega10));
    Ok(l + x.hermitian_partner() + x)
}

/// Lindblad-form generator valid when `kappa >> delta, omega10`: real decay
/// rates `gamma_i = |g_i|^2 / kappa`, cross-damping `sqrt(gamma0 gamma1)`
/// (with the phase of `g0 g1^*`) scaled by `params.interference`, no level
/// shifts.
pub fn build_approx_liouvillian(params: &ModelParams) -> Result<Superoperator> {
    build_approx_liouvillian_with(params, DecayRates::BadCavity)
}

pub fn build_approx_liouvillian_with(params: &ModelParams, rates: DecayRates) -> Result<Superoperator> {
    let (gamma0, gamma1) = rates.rates(params)?;
    let n = params.nbar;
    let cross = params.cross_coupling();
    let phase = if cross.norm() > 0.0 { cross / cross.norm() } else { ONE };
    let c = phase * (gamma0 * gamma1).sqrt() * params.interference;
    let a = sigma;

    let mut l = Superoperator::zeros(ATOM_DIM);
    l.add_commutator(&atomic_hamiltonian(params.omega10));
    l.add_lindblad(&a(0, 2), gamma0 * (n + 1.0));
    l.add_lindblad(&a(2, 0), gamma0 * n);
    l.add_lindblad(&a(1, 2), gamma1 * (n + 1.0));
    l.add_lindblad(&a(2, 1), gamma1 * n);

    let two = Complex64::new(2.0, 0.0);
    l.add_sandwich(&a(0, 2), &a(2, 1), two * c * (n + 1.0));
    l.add_sandwich(&a(1, 2), &a(2, 0), two * c.conj() * (n + 1.0));
    l.add_sandwich(&a(2, 1), &a(0, 2), two * c * n);
    l.add_left(&a(0, 1), -c * n);
    l.add_right(&a(0, 1), -c * n);
    l.add_sandwich(&a(2, 0), &a(1, 2), two * c.conj() * n);
    l.add_left(&a(1, 0), -c.conj() * n);
    l.add_right(&a(1, 0), -c.conj() * n);
    Ok(l)
}

/// Selects one of the atomic generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Generator {
    /// [`build_reduced_liouvillian`].
    #[default]
    Reduced,
    /// [`build_approx_liouvillian_with`].
    Approximate(DecayRates),
}

impl Generator {
    pub fn build(self, params: &ModelParams) -> Result<Superoperator> {
        match self {
            Generator::Reduced => build_reduced_liouvillian(params),
            Generator::Approximate(rates) => build_approx_liouvillian_with(params, rates),
        }
    }
}
