//! Liouville-space representation of linear maps on density matrices.
//!
//! Density matrices are vectorized by column stacking: element `(i, j)` of a
//! `d x d` matrix sits at index `i + d * j`, so `vec(A X B) = (B^T (x) A) vec(X)`.
//! This matches the storage order of `nalgebra::DMatrix`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Column-stacked vectorization.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CVector, dim: usize) -> Result<CMatrix> {
    if v.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: v.len(),
        });
    }
    Ok(CMatrix::from_column_slice(dim, dim, v.as_slice()))
}

/// Index of the transposed element: maps `vec(X)` positions to `vec(X^T)`.
#[inline]
fn transpose_index(idx: usize, dim: usize) -> usize {
    let (i, j) = (idx % dim, idx / dim);
    j + dim * i
}

/// Destination for the entries generated by the term builders.
pub(crate) trait TermSink {
    fn dim(&self) -> usize;
    fn push(&mut self, row: usize, col: usize, value: Complex64);

    /// `X -> coef * A X B`.
    fn sandwich(&mut self, a: &CMatrix, b: &CMatrix, coef: Complex64) {
        let d = self.dim();
        let a_nz = nonzeros(a);
        let b_nz = nonzeros(b);
        for &(i, k, aik) in &a_nz {
            for &(l, j, blj) in &b_nz {
                self.push(i + d * j, k + d * l, coef * aik * blj);
            }
        }
    }

    /// `X -> coef * A X`.
    fn left(&mut self, a: &CMatrix, coef: Complex64) {
        let d = self.dim();
        for (i, k, aik) in nonzeros(a) {
            for j in 0..d {
                self.push(i + d * j, k + d * j, coef * aik);
            }
        }
    }

    /// `X -> coef * X B`.
    fn right(&mut self, b: &CMatrix, coef: Complex64) {
        let d = self.dim();
        for (l, j, blj) in nonzeros(b) {
            for i in 0..d {
                self.push(i + d * j, i + d * l, coef * blj);
            }
        }
    }

    /// `X -> -i [H, X]`.
    fn commutator(&mut self, h: &CMatrix) {
        self.left(h, -I);
        self.right(h, I);
    }

    /// `X -> rate (2 C X C^dag - C^dag C X - X C^dag C)`.
    fn lindblad(&mut self, c: &CMatrix, rate: f64) {
        if rate == 0.0 {
            return;
        }
        let cd = c.adjoint();
        let cdc = &cd * c;
        let r = Complex64::new(rate, 0.0);
        self.sandwich(c, &cd, 2.0 * r);
        self.left(&cdc, -r);
        self.right(&cdc, -r);
    }
}

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != ZERO {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Dense superoperator acting on `d x d` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl TermSink for Superoperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn push(&mut self, row: usize, col: usize, value: Complex64) {
        self.matrix[(row, col)] += value;
    }
}

impl Superoperator {
    pub fn zeros(dim: usize) -> Self {
        let n = dim * dim;
        Self {
            dim,
            matrix: CMatrix::zeros(n, n),
        }
    }

    pub fn from_matrix(dim: usize, matrix: CMatrix) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("superoperator"));
        }
        Ok(Self { dim, matrix })
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `d^2 x d^2` matrix in the column-stacking convention.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.nrows(),
            });
        }
        unvectorize(&(&self.matrix * vectorize(x)), self.dim)
    }

    pub fn add_sandwich(&mut self, a: &CMatrix, b: &CMatrix, coef: Complex64) {
        self.sandwich(a, b, coef);
    }

    pub fn add_left(&mut self, a: &CMatrix, coef: Complex64) {
        self.left(a, coef);
    }

    pub fn add_right(&mut self, b: &CMatrix, coef: Complex64) {
        self.right(b, coef);
    }

    pub fn add_commutator(&mut self, h: &CMatrix) {
        self.commutator(h);
    }

    pub fn add_lindblad(&mut self, c: &CMatrix, rate: f64) {
        self.lindblad(c, rate);
    }

    /// The map `X -> (S[X^dag])^dag`. For a Hermitian argument this is the
    /// "+ h.c." partner of `S`.
    pub fn hermitian_partner(&self) -> Self {
        let d = self.dim;
        let n = d * d;
        let m = CMatrix::from_fn(n, n, |r, c| {
            self.matrix[(transpose_index(r, d), transpose_index(c, d))].conj()
        });
        Self { dim: d, matrix: m }
    }

    /// Entrywise complex conjugate of the superoperator matrix.
    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.map(|z| z.conj()),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.map(|z| z * s),
        }
    }

    /// Conjugation by a unitary on the Hilbert space: the generator of
    /// `X' = U^dag X U` dynamics, i.e. `S'[X'] = U^dag S[U X' U^dag] U`.
    pub fn transformed(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.nrows(),
            });
        }
        let ud = u.adjoint();
        // vec(U X U^dag) = (conj(U) (x) U) vec(X)
        let fwd = u.map(|z| z.conj()).kronecker(u);
        let back = u.transpose().kronecker(&ud);
        Ok(Self {
            dim: self.dim,
            matrix: back * &self.matrix * fwd,
        })
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_k |tr(S[E_k])|` over the matrix units `E_k`.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        (0..d * d)
            .map(|col| (0..d).map(|i| self.matrix[(i + d * i, col)]).sum::<Complex64>().norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `S - hermitian_partner(S)`; zero iff `S` maps
    /// Hermitian matrices to Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        let p = self.hermitian_partner();
        (&self.matrix - &p.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.matrix
            .clone()
            .try_schur(f64::EPSILON, 0)
            .and_then(|s| s.eigenvalues())
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Largest real part of the spectrum.
    pub fn spectral_abscissa(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Checks that the spectrum lies in the closed left half-plane up to
    /// `rel_tol * max_abs()`.
    pub fn is_dissipative(&self, rel_tol: f64) -> bool {
        self.spectral_abscissa() <= rel_tol * self.max_abs().max(f64::MIN_POSITIVE)
    }
}

impl std::ops::Add for Superoperator {
    type Output = Superoperator;

    fn add(self, rhs: Superoperator) -> Superoperator {
        assert_eq!(self.dim, rhs.dim, "superoperator dimensions differ");
        Superoperator {
            dim: self.dim,
            matrix: self.matrix + rhs.matrix,
        }
    }
}

/// Compressed-row sparse superoperator for composite spaces.
#[derive(Debug, Clone)]
pub struct SparseSuperoperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

/// Triplet accumulator used while building a [`SparseSuperoperator`].
pub(crate) struct SparseBuilder {
    dim: usize,
    triplets: Vec<(usize, usize, Complex64)>,
}

impl TermSink for SparseBuilder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn push(&mut self, row: usize, col: usize, value: Complex64) {
        self.triplets.push((row, col, value));
    }
}

impl SparseBuilder {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            dim,
            triplets: Vec::new(),
        }
    }

    pub(crate) fn finish(mut self) -> SparseSuperoperator {
        let n = self.dim * self.dim;
        self.triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(self.triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(self.triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.triplets {
            if last == Some((r, c)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseSuperoperator {
            dim: self.dim,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl SparseSuperoperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `y = S x` on vectorized matrices.
    pub fn apply_vec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim * self.dim);
        debug_assert_eq!(y.len(), self.dim * self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            let mut acc = ZERO;
            for k in lo..hi {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        }
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.nrows(),
            });
        }
        let mut y = vec![ZERO; self.dim * self.dim];
        self.apply_vec(x.as_slice(), &mut y);
        Ok(CMatrix::from_column_slice(self.dim, self.dim, &y))
    }

    pub fn to_dense(&self) -> Superoperator {
        let mut s = Superoperator::zeros(self.dim);
        for r in 0..self.dim * self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s.matrix[(r, self.col_idx[k])] += self.values[k];
            }
        }
        s
    }

    /// Upper bound on the induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim * self.dim)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.values[k].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        let mut col_sums = vec![ZERO; d * d];
        for i in 0..d {
            let r = i + d * i;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                col_sums[self.col_idx[k]] += self.values[k];
            }
        }
        col_sums.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Matrix unit `|i><j|` on a `dim`-dimensional space.
pub fn matrix_unit(dim: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(i, j)] = ONE;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(d: usize, seed: u64) -> CMatrix {
        // small LCG keeps the test free of extra dependencies
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        CMatrix::from_fn(d, d, |_, _| Complex64::new(next(), next()))
    }

    #[test]
    fn sandwich_matches_kronecker_identity() {
        let d = 3;
        let a = random_matrix(d, 1);
        let b = random_matrix(d, 2);
        let x = random_matrix(d, 3);
        let mut s = Superoperator::zeros(d);
        s.add_sandwich(&a, &b, ONE);
        let direct = &a * &x * &b;
        let lifted = s.apply(&x).unwrap();
        assert!((direct - lifted).norm() < 1e-13);
        let kron = b.transpose().kronecker(&a);
        assert!((kron - s.matrix()).norm() < 1e-13);
    }

    #[test]
    fn left_right_commutator() {
        let d = 3;
        let h = random_matrix(d, 4);
        let x = random_matrix(d, 5);
        let mut s = Superoperator::zeros(d);
        s.add_commutator(&h);
        let expect = (&h * &x - &x * &h) * (-I);
        assert!((s.apply(&x).unwrap() - expect).norm() < 1e-13);
    }

    #[test]
    fn hermitian_partner_is_adjoint_of_image() {
        let d = 3;
        let a = random_matrix(d, 6);
        let b = random_matrix(d, 7);
        let mut s = Superoperator::zeros(d);
        s.add_sandwich(&a, &b, Complex64::new(0.3, -1.1));
        s.add_left(&a, Complex64::new(-0.2, 0.5));
        let x = random_matrix(d, 8);
        let x = &x + x.adjoint();
        let expect = s.apply(&x).unwrap().adjoint();
        let got = s.hermitian_partner().apply(&x).unwrap();
        assert!((expect - got).norm() < 1e-13);
    }

    #[test]
    fn lindblad_term_is_trace_and_hermiticity_preserving() {
        let d = 4;
        let c = random_matrix(d, 9);
        let mut s = Superoperator::zeros(d);
        s.add_lindblad(&c, 0.7);
        assert!(s.trace_defect() < 1e-14);
        assert!(s.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn sparse_and_dense_builders_agree() {
        let d = 4;
        let a = random_matrix(d, 10);
        let b = random_matrix(d, 11);
        let h = random_matrix(d, 12);
        let mut dense = Superoperator::zeros(d);
        let mut sparse = SparseBuilder::new(d);
        for sink in [&mut dense as &mut dyn TermSink, &mut sparse as &mut dyn TermSink] {
            sink.sandwich(&a, &b, Complex64::new(0.5, 0.25));
            sink.commutator(&h);
            sink.lindblad(&a, 0.3);
        }
        let sparse = sparse.finish();
        assert!((sparse.to_dense().matrix() - dense.matrix()).norm() < 1e-12);
        let x = random_matrix(d, 13);
        assert!((sparse.apply(&x).unwrap() - dense.apply(&x).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn transformed_generator_acts_in_rotated_basis() {
        let d = 3;
        let a = random_matrix(d, 14);
        let mut s = Superoperator::zeros(d);
        s.add_lindblad(&a, 1.0);
        // a real rotation is unitary
        let (c, sn) = (0.6f64, 0.8f64);
        let u = CMatrix::from_row_slice(
            3,
            3,
            &[c, -sn, 0.0, sn, c, 0.0, 0.0, 0.0, 1.0].map(|v| Complex64::new(v, 0.0)),
        );
        let t = s.transformed(&u).unwrap();
        let x = random_matrix(d, 15);
        let expect = u.adjoint() * s.apply(&(&u * &x * u.adjoint())).unwrap() * &u;
        assert!((t.apply(&x).unwrap() - expect).norm() < 1e-12);
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = CMatrix::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, 0.0));
        let v = vectorize(&m);
        assert_eq!(v.iter().map(|z| z.re).collect::<Vec<_>>(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(unvectorize(&v, 2).unwrap(), m);
        assert!(unvectorize(&v, 3).is_err());
    }
}
