//! Solvers over Liouvillians: propagation, steady states (including
//! degenerate kernels), spectral projection onto the kernel, and
//! regression-theorem correlation transforms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::ode::{self, OdeTolerance};
use crate::superop::{unvectorize, vectorize, CMatrix, CVector, SparseSuperoperator, Superoperator, I, ONE};

/// Numerical thresholds shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Singular values below `kernel_threshold * sigma_max` span the kernel.
    pub kernel_threshold: f64,
    /// Eigenvalues with real part below `-decay_threshold * scale` decay.
    pub decay_threshold: f64,
    /// Largest admissible kernel component of a correlation source.
    pub component_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            kernel_threshold: 1e-10,
            decay_threshold: 1e-12,
            component_tolerance: 1e-10,
        }
    }
}

/// Result of [`steady_state`].
#[derive(Debug, Clone)]
pub struct SteadyStateReport {
    /// The unique steady state; `None` when the kernel is degenerate.
    pub state: Option<DensityMatrix>,
    pub kernel_dimension: usize,
    /// Slowest nonzero decay rate.
    pub spectral_gap: f64,
}

impl SteadyStateReport {
    pub fn unique(self) -> Result<DensityMatrix> {
        let k = self.kernel_dimension;
        self.state.ok_or(Error::DegenerateKernel(k))
    }
}

fn check_state_dim(l_dim: usize, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != l_dim {
        return Err(Error::DimensionMismatch {
            expected: l_dim,
            found: rho.dim(),
        });
    }
    Ok(())
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `exp(L t) rho0` by scaling-and-squaring Padé.
pub fn evolve(l: &Superoperator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_state_dim(l.dim(), rho0)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::param("t", format!("must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let prop = expm(&(l.matrix() * Complex64::new(t, 0.0)))?;
    let out = unvectorize(&(prop * vectorize(rho0.matrix())), l.dim())?;
    DensityMatrix::from_evolved(out)
}

/// States at each of `times` (not necessarily sorted).
pub fn evolve_series(l: &Superoperator, rho0: &DensityMatrix, times: &[f64]) -> Result<Vec<DensityMatrix>> {
    times.iter().map(|&t| evolve(l, rho0, t)).collect()
}

/// Adaptive Dormand–Prince propagation for sparse (composite) generators.
pub fn evolve_sparse(
    l: &SparseSuperoperator,
    rho0: &DensityMatrix,
    t: f64,
    tol: OdeTolerance,
) -> Result<DensityMatrix> {
    check_state_dim(l.dim(), rho0)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::param("t", format!("must be finite and >= 0, got {t}")));
    }
    let x = ode::integrate(l, rho0.matrix().as_slice(), t, tol)?;
    DensityMatrix::from_evolved(CMatrix::from_column_slice(l.dim(), l.dim(), &x))
}

/// Kernel bases of a Liouvillian from its singular value decomposition.
struct Kernel {
    /// Right null vectors as columns.
    right: CMatrix,
    /// Left null vectors (`u^dag L = 0`) as columns.
    left: CMatrix,
    sigma_max: f64,
}

impl Kernel {
    fn new(m: &CMatrix, threshold: f64) -> Result<Self> {
        let n = m.nrows();
        let svd = m.clone().svd(true, true);
        let u = svd.u.ok_or(Error::Singular("SVD left vectors"))?;
        let v_t = svd.v_t.ok_or(Error::Singular("SVD right vectors"))?;
        let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let cut = threshold * sigma_max;
        let idx: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] < cut).collect();
        let right = CMatrix::from_fn(n, idx.len(), |r, c| v_t[(idx[c], r)].conj());
        let left = CMatrix::from_fn(n, idx.len(), |r, c| u[(r, idx[c])]);
        Ok(Self { right, left, sigma_max })
    }

    fn dim(&self) -> usize {
        self.right.ncols()
    }

    /// `R (U^dag R)^-1`, so that `P = proj_right * left^dag` is the spectral
    /// projector onto the kernel along the decaying modes.
    fn projector_factor(&self) -> Result<CMatrix> {
        let overlap = self.left.adjoint() * &self.right;
        let sv = overlap.clone().svd(false, false).singular_values;
        let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 1e-8) {
            return Err(Error::DefectiveKernel(min));
        }
        let inv = overlap.try_inverse().ok_or(Error::DefectiveKernel(min))?;
        Ok(&self.right * inv)
    }
}

fn sorted_by_modulus(mut ev: Vec<Complex64>) -> Vec<Complex64> {
    ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    ev
}

/// Steady state from the SVD null space of `L`.
pub fn steady_state(l: &Superoperator) -> Result<SteadyStateReport> {
    steady_state_with(l, &SolverConfig::default())
}

pub fn steady_state_with(l: &Superoperator, cfg: &SolverConfig) -> Result<SteadyStateReport> {
    let d = l.dim();
    let kernel = Kernel::new(l.matrix(), cfg.kernel_threshold)?;
    let k = kernel.dim();
    if k == 0 {
        return Err(Error::NoUnitTraceKernel);
    }
    // a kernel element with nonzero trace must exist
    let traces: Vec<Complex64> = (0..k)
        .map(|c| (0..d).map(|i| kernel.right[(i + d * i, c)]).sum())
        .collect();
    let max_trace = traces.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_trace < 1e-8 {
        return Err(Error::NoUnitTraceKernel);
    }

    let ev = sorted_by_modulus(l.eigenvalues());
    let spectral_gap = ev
        .iter()
        .skip(k)
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min);
    let spectral_gap = if spectral_gap.is_finite() { spectral_gap.max(0.0) } else { 0.0 };

    let state = if k == 1 {
        let v = kernel.right.column(0).into_owned();
        let rho = unvectorize(&v, d)? / traces[0];
        Some(DensityMatrix::from_evolved(hermitize(rho))?)
    } else {
        None
    };
    Ok(SteadyStateReport {
        state,
        kernel_dimension: k,
        spectral_gap,
    })
}

/// Steady state of a large (sparse) generator with a one-dimensional kernel,
/// by dense LU with the `(0, 0)` balance equation replaced by the trace
/// condition.
pub fn steady_state_sparse(l: &SparseSuperoperator) -> Result<DensityMatrix> {
    let d = l.dim();
    let dense = l.to_dense().into_matrix();
    let mut system = dense.clone();
    for c in 0..d * d {
        system[(0, c)] = Complex64::new(0.0, 0.0);
    }
    for i in 0..d {
        system[(0, i + d * i)] = ONE;
    }
    let mut rhs = CVector::zeros(d * d);
    rhs[0] = ONE;
    let x = system.lu().solve(&rhs).ok_or(Error::Singular("steady-state system"))?;
    let residual = (&dense * &x).norm();
    let scale = l.norm_inf() * x.norm();
    if !(residual <= 1e-8 * scale) {
        return Err(Error::DegenerateKernel(2));
    }
    DensityMatrix::from_evolved(hermitize(unvectorize(&x, d)?))
}

/// `lim_{t -> inf} exp(L t) rho0` via the spectral projector onto the kernel.
pub fn asymptotic_state(l: &Superoperator, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    asymptotic_state_with(l, rho0, &SolverConfig::default())
}

pub fn asymptotic_state_with(l: &Superoperator, rho0: &DensityMatrix, cfg: &SolverConfig) -> Result<DensityMatrix> {
    check_state_dim(l.dim(), rho0)?;
    let kernel = Kernel::new(l.matrix(), cfg.kernel_threshold)?;
    let k = kernel.dim();
    if k == 0 {
        return Err(Error::NoUnitTraceKernel);
    }
    let factor = kernel.projector_factor()?;

    let scale = kernel.sigma_max.max(f64::MIN_POSITIVE);
    let persistent = l
        .eigenvalues()
        .iter()
        .filter(|z| z.re >= -cfg.decay_threshold * scale)
        .count();
    if persistent > k {
        return Err(Error::NonDecaying(persistent - k));
    }

    let v = vectorize(rho0.matrix());
    let projected = &factor * (kernel.left.adjoint() * v);
    DensityMatrix::from_evolved(hermitize(unvectorize(&projected, l.dim())?))
}

/// Frequency-domain two-time correlations by the quantum regression theorem.
///
/// For a source `X0` with no kernel component,
/// `int_0^inf e^{i w tau} tr[A exp(L tau) X0] d tau = -tr[A (L + i w)^{-1} X0]`.
/// The resolvent is evaluated on the deflated operator
/// `L - R (U^dag R)^{-1} U^dag`, which is regular at `w = 0` and agrees with
/// `L` on the complement of the kernel.
pub struct CorrelationSolver {
    dim: usize,
    deflated: CMatrix,
    left: CMatrix,
    factor: CMatrix,
    generator: CMatrix,
    scale: f64,
    cfg: SolverConfig,
}

impl CorrelationSolver {
    pub fn new(l: &Superoperator) -> Result<Self> {
        Self::with_config(l, SolverConfig::default())
    }

    pub fn with_config(l: &Superoperator, cfg: SolverConfig) -> Result<Self> {
        let kernel = Kernel::new(l.matrix(), cfg.kernel_threshold)?;
        let factor = kernel.projector_factor()?;
        let deflated = l.matrix() - &factor * kernel.left.adjoint();
        Ok(Self {
            dim: l.dim(),
            deflated,
            left: kernel.left,
            factor,
            generator: l.matrix().clone(),
            scale: kernel.sigma_max,
            cfg,
        })
    }

    /// Norm of the kernel (non-decaying) part of `source`.
    pub fn kernel_component(&self, source: &CMatrix) -> f64 {
        let v = vectorize(source);
        (&self.factor * (self.left.adjoint() * v)).norm()
    }

    /// Checks that `rho` is a fixed point of the generator.
    pub fn check_stationary(&self, rho: &DensityMatrix) -> Result<()> {
        let r = (&self.generator * vectorize(rho.matrix())).norm();
        if r > 1e-8 * self.scale.max(1.0) {
            return Err(Error::InvalidState(format!("not stationary (residual {r:.3e})")));
        }
        Ok(())
    }

    /// `int_0^inf e^{i w tau} tr[A exp(L tau) X0] d tau`.
    pub fn transform_source(&self, a_op: &CMatrix, source: &CMatrix, omega: f64) -> Result<Complex64> {
        if source.nrows() != self.dim || a_op.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: source.nrows(),
            });
        }
        let v = vectorize(source);
        let vnorm = v.norm();
        if vnorm == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let comp = self.kernel_component(source);
        if comp > self.cfg.component_tolerance * vnorm.max(1.0) {
            return Err(Error::SingularResolvent(comp));
        }
        let n = self.dim * self.dim;
        let shifted = &self.deflated + DMatrix::<Complex64>::identity(n, n) * (I * omega);
        let x = shifted
            .lu()
            .solve(&v)
            .ok_or(Error::SingularResolvent(0.0))?;
        let x = unvectorize(&x, self.dim)?;
        Ok(-(a_op * x).trace())
    }

    /// Transform of `<A(tau) B(0)>`.
    pub fn correlation(&self, a_op: &CMatrix, b_op: &CMatrix, rho_ss: &DensityMatrix, omega: f64) -> Result<Complex64> {
        self.transform_source(a_op, &(b_op * rho_ss.matrix()), omega)
    }

    /// Transform of `<B(0) A(tau)>`.
    pub fn reversed_correlation(
        &self,
        a_op: &CMatrix,
        b_op: &CMatrix,
        rho_ss: &DensityMatrix,
        omega: f64,
    ) -> Result<Complex64> {
        self.transform_source(a_op, &(rho_ss.matrix() * b_op), omega)
    }
}

/// One-shot form of [`CorrelationSolver::correlation`].
pub fn correlation_transform(
    l: &Superoperator,
    rho_ss: &DensityMatrix,
    a_op: &CMatrix,
    b_op: &CMatrix,
    omega: f64,
) -> Result<Complex64> {
    let solver = CorrelationSolver::new(l)?;
    solver.check_stationary(rho_ss)?;
    solver.correlation(a_op, b_op, rho_ss, omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_approx_liouvillian, build_reduced_liouvillian, sigma, ModelParams};
    use crate::testutil::{random_lindbladian, random_matrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn degenerate_params() -> ModelParams {
        ModelParams {
            omega10: 0.0,
            ..ModelParams::default()
        }
    }

    fn dark_state() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        DensityMatrix::pure(&CVector::from_vec(vec![c(-s, 0.0), c(s, 0.0), c(0.0, 0.0)])).unwrap()
    }

    #[test]
    fn evolve_at_zero_time_is_identity() {
        let l = random_lindbladian(3, 1);
        let rho = DensityMatrix::basis(3, 1);
        assert_eq!(evolve(&l, &rho, 0.0).unwrap(), rho);
    }

    #[test]
    fn evolve_rejects_bad_inputs() {
        let l = random_lindbladian(3, 1);
        assert!(evolve(&l, &DensityMatrix::basis(3, 0), -1.0).is_err());
        assert!(evolve(&l, &DensityMatrix::basis(3, 0), f64::NAN).is_err());
        assert!(matches!(
            evolve(&l, &DensityMatrix::basis(2, 0), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dark_state_is_stationary_for_long_times() {
        let p = degenerate_params();
        let l = build_approx_liouvillian(&p).unwrap();
        let gamma = p.g0.norm_sqr() / p.kappa;
        let dark = dark_state();
        for t in [1.0, 10.0, 100.0, 1000.0] {
            let out = evolve(&l, &dark, t / gamma).unwrap();
            let dev = (out.matrix() - dark.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-8, "t = {t}: {dev}");
        }
    }

    #[test]
    fn degenerate_kernel_is_reported() {
        let l = build_approx_liouvillian(&degenerate_params()).unwrap();
        let report = steady_state(&l).unwrap();
        assert_eq!(report.kernel_dimension, 2);
        assert!(report.state.is_none());
        assert!(matches!(report.unique(), Err(Error::DegenerateKernel(2))));
    }

    #[test]
    fn asymptotic_populations_depend_on_initial_state() {
        let p = degenerate_params();
        let l = build_approx_liouvillian(&p).unwrap();
        let n = p.nbar;
        let s = 0.5f64.sqrt();
        // columns: |S>, |A>, |2>
        let u = CMatrix::from_row_slice(3, 3, &[s, -s, 0.0, s, s, 0.0, 0.0, 0.0, 1.0].map(|v| c(v, 0.0)));

        let from_excited = asymptotic_state(&l, &DensityMatrix::basis(3, 2)).unwrap().in_basis(&u).unwrap();
        assert!((from_excited.population(2) - n / (2.0 * n + 1.0)).abs() < 1e-8);
        assert!((from_excited.population(0) - (n + 1.0) / (2.0 * n + 1.0)).abs() < 1e-8);
        assert!(from_excited.population(1).abs() < 1e-8);

        let from_ground = asymptotic_state(&l, &DensityMatrix::basis(3, 0)).unwrap().in_basis(&u).unwrap();
        assert!((from_ground.population(2) - n / (4.0 * n + 2.0)).abs() < 1e-8);
        assert!((from_ground.population(0) - (n + 1.0) / (4.0 * n + 2.0)).abs() < 1e-8);
        assert!((from_ground.population(1) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn asymptotic_state_matches_long_time_evolution() {
        let p = degenerate_params();
        let l = build_approx_liouvillian(&p).unwrap();
        let rho0 = DensityMatrix::basis(3, 1);
        let late = evolve(&l, &rho0, 50.0).unwrap();
        let limit = asymptotic_state(&l, &rho0).unwrap();
        assert!(late.trace_distance(&limit) < 1e-9);
    }

    #[test]
    fn unique_kernel_asymptotic_state_ignores_initial_state() {
        let l = build_reduced_liouvillian(&ModelParams::default().with_delta(60.0)).unwrap();
        let ss = steady_state(&l).unwrap().unique().unwrap();
        for k in 0..3 {
            let a = asymptotic_state(&l, &DensityMatrix::basis(3, k)).unwrap();
            assert!(a.trace_distance(&ss) < 1e-10);
        }
    }

    #[test]
    fn single_transition_relaxes_to_two_level_thermal_state() {
        for delta in [-150.0, 0.0, 90.0] {
            let p = ModelParams::default().with_couplings(10.0, 0.0).with_delta(delta);
            let l = build_reduced_liouvillian(&p).unwrap();
            let report = steady_state(&l).unwrap();
            // |1><1| is frozen, so the kernel is two-dimensional
            assert_eq!(report.kernel_dimension, 2);
            let mixed = DensityMatrix::new(CMatrix::from_diagonal(&CVector::from_vec(vec![
                c(0.3, 0.0),
                c(0.5, 0.0),
                c(0.2, 0.0),
            ])))
            .unwrap();
            let limit = asymptotic_state(&l, &mixed).unwrap();
            let ratio = limit.population(2) / limit.population(0);
            assert!((ratio - p.nbar / (p.nbar + 1.0)).abs() < 1e-10);
            assert!((limit.population(1) - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn steady_state_residual_and_fixed_point() {
        let l = build_reduced_liouvillian(&ModelParams::default()).unwrap();
        let report = steady_state(&l).unwrap();
        assert_eq!(report.kernel_dimension, 1);
        assert!(report.spectral_gap > 0.0);
        let gap = report.spectral_gap;
        let rho = report.unique().unwrap();
        let residual = (l.matrix() * vectorize(rho.matrix())).norm();
        assert!(residual <= 1e-10 * l.matrix().norm());
        let later = evolve(&l, &rho, 1e3 / gap).unwrap();
        let dev = (later.matrix() - rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-9, "{dev}");
    }

    #[test]
    fn pure_hamiltonian_dynamics_has_no_asymptotic_limit() {
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.5, 0.0)]));
        let mut l = Superoperator::zeros(3);
        l.add_commutator(&h);
        assert!(matches!(
            asymptotic_state(&l, &DensityMatrix::basis(3, 0)),
            Err(Error::NonDecaying(6))
        ));
    }

    #[test]
    fn defective_zero_eigenvalue_is_reported() {
        // a Jordan block at zero on the (0,0)/(1,1) components
        let mut m = CMatrix::identity(4, 4) * c(-1.0, 0.0);
        m[(0, 0)] = c(0.0, 0.0);
        m[(3, 3)] = c(0.0, 0.0);
        m[(0, 3)] = c(1.0, 0.0);
        let l = Superoperator::from_matrix(2, m).unwrap();
        assert!(matches!(
            asymptotic_state(&l, &DensityMatrix::basis(2, 0)),
            Err(Error::DefectiveKernel(_))
        ));
    }

    #[test]
    fn generator_without_unit_trace_kernel_is_rejected() {
        // kernel is spanned by the traceless |0><1|
        let mut m = CMatrix::identity(4, 4) * c(-1.0, 0.0);
        m[(2, 2)] = c(0.0, 0.0);
        let l = Superoperator::from_matrix(2, m).unwrap();
        assert!(matches!(steady_state(&l), Err(Error::NoUnitTraceKernel)));
    }

    #[test]
    fn correlation_of_vanishing_source_is_zero() {
        let l = build_reduced_liouvillian(&ModelParams::default()).unwrap();
        let rho = steady_state(&l).unwrap().unique().unwrap();
        // A_01 annihilates the diagonal steady state from the left
        let b = CMatrix::zeros(3, 3);
        for w in [-300.0, 0.0, 12.5] {
            assert_eq!(correlation_transform(&l, &rho, &sigma(2, 0), &b, w).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn correlation_decays_at_large_frequency() {
        let l = build_reduced_liouvillian(&ModelParams::default()).unwrap();
        let rho = steady_state(&l).unwrap().unique().unwrap();
        let solver = CorrelationSolver::new(&l).unwrap();
        let scale = l.max_abs();
        let (a, b) = (sigma(0, 2), sigma(2, 0));
        let equal_time = rho.expect(&(&a * &b));
        for sign in [1.0, -1.0] {
            let near = solver.correlation(&a, &b, &rho, sign * 10.0 * scale).unwrap();
            let far = solver.correlation(&a, &b, &rho, sign * 1e3 * scale).unwrap();
            // the tail is i <AB> / omega, so two decades give a factor of 10^2 up to O(1/omega)
            assert!(near.norm() >= 0.9e2 * far.norm(), "{near} {far}");
            let tail = far * sign * 1e3 * scale;
            assert!((tail - c(0.0, 1.0) * equal_time).norm() < 1e-3 * equal_time.norm());
        }
    }

    #[test]
    fn correlation_with_kernel_component_is_rejected() {
        let l = build_reduced_liouvillian(&ModelParams::default()).unwrap();
        let rho = steady_state(&l).unwrap().unique().unwrap();
        // B = identity: the source is the steady state itself
        let id = CMatrix::identity(3, 3);
        assert!(matches!(
            correlation_transform(&l, &rho, &sigma(0, 0), &id, 1.0),
            Err(Error::SingularResolvent(_))
        ));
        let not_stationary = DensityMatrix::basis(3, 0);
        assert!(correlation_transform(&l, &not_stationary, &sigma(0, 2), &sigma(2, 0), 1.0).is_err());
    }

    #[test]
    fn correlation_satisfies_hermiticity_relation() {
        let mut p = ModelParams::default().with_delta(70.0);
        p.g1 = c(8.0, 3.0);
        let l = build_reduced_liouvillian(&p).unwrap();
        let rho = steady_state(&l).unwrap().unique().unwrap();
        let solver = CorrelationSolver::new(&l).unwrap();
        let a = random_matrix(3, 21);
        let b = random_matrix(3, 22);
        // subtract the stationary means so that both sources decay
        let a = &a - CMatrix::identity(3, 3) * rho.expect(&a);
        let b = &b - CMatrix::identity(3, 3) * rho.expect(&b);
        for w in [-150.0, -3.0, 0.0, 44.0] {
            let lhs = solver.correlation(&a, &b, &rho, w).unwrap();
            let rhs = solver
                .reversed_correlation(&a.adjoint(), &b.adjoint(), &rho, -w)
                .unwrap()
                .conj();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0), "{lhs} {rhs}");
        }
    }

    #[test]
    fn thermal_two_level_line_has_expected_width() {
        // g1 = 0: a single damped coherence of rate gamma0 (2N + 1)
        let p = ModelParams::default().with_couplings(10.0, 0.0).with_delta(30.0);
        let l = build_reduced_liouvillian(&p).unwrap();
        let rho0 = DensityMatrix::new(CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.6, 0.0),
            c(0.0, 0.0),
            c(0.4, 0.0),
        ])))
        .unwrap();
        let rho = asymptotic_state(&l, &rho0).unwrap();
        let solver = CorrelationSolver::new(&l).unwrap();
        let (gamma0, _) = crate::model::effective_rates(&p).unwrap();
        let width = gamma0 * (2.0 * p.nbar + 1.0);

        let grid: Vec<f64> = (0..=40000).map(|k| -200.0 + k as f64 * 0.005).collect();
        let values: Vec<f64> = grid
            .iter()
            .map(|&w| solver.correlation(&sigma(2, 0), &sigma(0, 2), &rho, w).unwrap().re)
            .collect();
        let (imax, &peak) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let centre = grid[imax];
        let shift = crate::model::response_function(&p, crate::model::Branch::Minus).unwrap().shift();
        let expected = -p.omega10 / 2.0 - (2.0 * p.nbar + 1.0) * shift * p.g0.norm_sqr();
        assert!((centre - expected).abs() < 0.05, "centre {centre} vs {expected}");
        let half = peak / 2.0;
        let cross = |range: &mut dyn Iterator<Item = usize>| {
            let mut prev = imax;
            for k in range {
                if values[k] < half {
                    let t = (values[prev] - half) / (values[prev] - values[k]);
                    return grid[prev] + t * (grid[k] - grid[prev]);
                }
                prev = k;
            }
            panic!("no half-maximum crossing");
        };
        let right = cross(&mut (imax + 1..grid.len()));
        let left = cross(&mut (0..imax).rev());
        let hwhm = 0.5 * (right - left);
        assert!((hwhm - width).abs() < 0.02 * width, "{hwhm} vs {width}");
    }
}
