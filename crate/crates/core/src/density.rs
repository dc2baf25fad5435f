use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::superop::{CMatrix, CVector};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

/// A density matrix in a fixed basis.
///
/// [`DensityMatrix::new`] enforces Hermiticity, unit trace and positivity.
/// Matrices produced by propagating a generator that is not completely
/// positive are wrapped with [`DensityMatrix::from_evolved`], which only
/// checks dimensions and finiteness; use [`DensityMatrix::min_eigenvalue`] to
/// inspect them.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_evolved(matrix)?;
        let scale = rho.matrix.norm().max(1.0);
        let herm = rho.hermiticity_defect();
        if herm > HERMITIAN_TOL * scale {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:.3e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).norm() > TRACE_TOL * scale {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = rho.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    /// Normalizes an arbitrary positive-semidefinite Hermitian matrix to unit
    /// trace before validating.
    pub fn normalized(matrix: CMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if tr.norm() < f64::EPSILON || tr.re <= 0.0 {
            return Err(Error::InvalidState(format!("cannot normalize trace {tr}")));
        }
        Self::new(matrix / tr)
    }

    pub(crate) fn from_evolved(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("density matrix"));
        }
        Ok(Self { matrix })
    }

    /// Pure state `|psi><psi|` for a normalized ket.
    pub fn pure(ket: &CVector) -> Result<Self> {
        let n = ket.norm();
        if n < f64::EPSILON {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let k = ket / Complex64::new(n, 0.0);
        Self::new(&k * k.adjoint())
    }

    /// `|k><k|` in the computational basis.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self { matrix: m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Diagonal entry `rho_kk` (real part).
    pub fn population(&self, k: usize) -> f64 {
        self.matrix[(k, k)].re
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Expectation value `tr(rho O)`.
    pub fn expect(&self, op: &CMatrix) -> Complex64 {
        (&self.matrix * op).trace()
    }

    /// Trace distance `1/2 ||rho - sigma||_1`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.matrix - &other.matrix;
        let h = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
        0.5 * SymmetricEigen::new(h).eigenvalues.iter().map(|e| e.abs()).sum::<f64>()
    }

    /// `U^dag rho U`: components in the basis formed by the columns of `U`.
    pub fn in_basis(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.nrows(),
            });
        }
        Ok(Self {
            matrix: u.adjoint() * &self.matrix * u,
        })
    }

    /// Tensor product `self (x) other` with `other` as the fast index.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_invalid_matrices() {
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(not_herm), Err(Error::InvalidState(_))));
        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(DensityMatrix::new(negative).is_err());
        let nan = CMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(matches!(DensityMatrix::new(nan), Err(Error::NonFinite(_))));
    }

    #[test]
    fn normalization_and_pure_states() {
        let rho = DensityMatrix::normalized(CMatrix::identity(3, 3) * c(2.0, 0.0)).unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed(3));
        let ket = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let p = DensityMatrix::pure(&ket).unwrap();
        assert!((p.get(0, 1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!(p.min_eigenvalue().abs() < 1e-12);
    }

    #[test]
    fn trace_distance_of_orthogonal_states_is_one() {
        let a = DensityMatrix::basis(3, 0);
        let b = DensityMatrix::basis(3, 2);
        assert!((a.trace_distance(&b) - 1.0).abs() < 1e-14);
        assert!(a.trace_distance(&a) < 1e-15);
    }
}
