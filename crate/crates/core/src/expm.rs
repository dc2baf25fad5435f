//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (Higham 2005), orders 3, 5, 7, 9 and 13.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::superop::CMatrix;

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scale(m: &CMatrix, s: f64) -> CMatrix {
    m * Complex64::new(s, 0.0)
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let eye = CMatrix::identity(n, n);
    if n == 0 {
        return Ok(eye);
    }
    let norm = one_norm(a);

    for (m, theta) in THETA {
        if norm <= theta {
            let (u, v) = pade_low(a, m, &eye);
            return solve_pade(&u, &v);
        }
    }

    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a_s = scale(a, 0.5f64.powi(s));
    let (u, v) = pade13(&a_s, &eye);
    let mut r = solve_pade(&u, &v)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn pade_low(a: &CMatrix, m: usize, eye: &CMatrix) -> (CMatrix, CMatrix) {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let a2 = a * a;
    let mut u = scale(eye, b[1]);
    let mut v = scale(eye, b[0]);
    let mut pow = eye.clone();
    for k in 1..=m / 2 {
        pow = &pow * &a2;
        u += scale(&pow, b[2 * k + 1]);
        v += scale(&pow, b[2 * k]);
    }
    (a * u, v)
}

fn pade13(a: &CMatrix, eye: &CMatrix) -> (CMatrix, CMatrix) {
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = scale(&a6, b[13]) + scale(&a4, b[11]) + scale(&a2, b[9]);
    let u = a * (&a6 * inner_u
        + scale(&a6, b[7])
        + scale(&a4, b[5])
        + scale(&a2, b[3])
        + scale(eye, b[1]));
    let inner_v = scale(&a6, b[12]) + scale(&a4, b[10]) + scale(&a2, b[8]);
    let v = &a6 * inner_v + scale(&a6, b[6]) + scale(&a4, b[4]) + scale(&a2, b[2]) + scale(eye, b[0]);
    (u, v)
}

fn solve_pade(u: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let p = v + u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .ok_or(Error::Singular("Padé denominator"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let z = CMatrix::zeros(4, 4);
        assert_eq!(expm(&z).unwrap(), CMatrix::identity(4, 4));
    }

    #[test]
    fn diagonal_matrix_across_all_orders() {
        for scale in [1e-3, 0.1, 0.5, 1.5, 4.0, 40.0, 900.0] {
            let d = [c(-1.0, 0.3), c(0.2, -2.0), c(-0.7, 0.0)];
            let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.iter().map(|z| z * scale).collect()));
            let e = expm(&a).unwrap();
            for (k, z) in d.iter().enumerate() {
                let want = (z * scale).exp();
                // squaring amplifies rounding in proportion to the norm
                let tol = 1e-13 * scale.max(1.0);
                assert!((e[(k, k)] - want).norm() <= tol * want.norm().max(1.0), "scale {scale}");
            }
        }
    }

    #[test]
    fn rotation_generator() {
        // exp(t [[0, -1], [1, 0]]) is a rotation by t
        let t = 2.3;
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-t, 0.0), c(t, 0.0), c(0.0, 0.0)]);
        let e = expm(&a).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(t.cos(), 0.0), c(-t.sin(), 0.0), c(t.sin(), 0.0), c(t.cos(), 0.0)]);
        assert!((e - want).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        let e = expm(&a).unwrap();
        assert!((e[(0, 2)] - c(4.5, 0.0)).norm() < 1e-13);
        assert!((e[(0, 1)] - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn agrees_with_nalgebra_exponential() {
        let a = CMatrix::from_fn(5, 5, |i, j| c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0));
        for s in [0.01, 0.3, 2.0] {
            let m = &a * c(s, 0.0);
            let ours = expm(&m).unwrap();
            let theirs = m.exp();
            assert!((&ours - &theirs).norm() <= 1e-11 * theirs.norm());
        }
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(expm(&CMatrix::zeros(2, 3)).is_err());
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(f64::INFINITY, 0.0);
        assert!(matches!(expm(&a), Err(Error::NonFinite(_))));
    }
}
