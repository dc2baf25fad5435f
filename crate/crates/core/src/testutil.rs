//! Helpers shared by unit tests.

use num_complex::Complex64;

use crate::superop::{CMatrix, Superoperator};

/// Deterministic pseudo-random complex matrix with entries in `[-0.5, 0.5)`.
pub(crate) fn random_matrix(d: usize, seed: u64) -> CMatrix {
    let mut s = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    CMatrix::from_fn(d, d, |_, _| Complex64::new(next(), next()))
}

/// Random Lindblad generator with one Hamiltonian and two jump operators.
pub(crate) fn random_lindbladian(d: usize, seed: u64) -> Superoperator {
    let h = random_matrix(d, seed);
    let h = &h + h.adjoint();
    let mut l = Superoperator::zeros(d);
    l.add_commutator(&h);
    l.add_lindblad(&random_matrix(d, seed + 1), 0.5);
    l.add_lindblad(&random_matrix(d, seed + 2), 0.25);
    l
}
