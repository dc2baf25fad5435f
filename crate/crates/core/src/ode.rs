//! Dormand–Prince 5(4) integrator for `dx/dt = S x` with a sparse `S`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::superop::{SparseSuperoperator, ZERO};

#[derive(Debug, Clone, Copy)]
pub struct OdeTolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights equal the last row of A (FSAL)
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates from `x0` over `[0, t]`.
pub fn integrate(op: &SparseSuperoperator, x0: &[Complex64], t: f64, tol: OdeTolerance) -> Result<Vec<Complex64>> {
    let n = x0.len();
    if t == 0.0 {
        return Ok(x0.to_vec());
    }
    let mut x = x0.to_vec();
    let mut k: Vec<Vec<Complex64>> = vec![vec![ZERO; n]; 7];
    let mut stage = vec![ZERO; n];
    let mut x_new = vec![ZERO; n];
    op.apply_vec(&x, &mut k[0]);

    let mut h = (0.1 / op.norm_inf().max(1e-300)).min(t);
    let mut time = 0.0;
    let mut steps = 0usize;
    while time < t {
        if steps >= tol.max_steps {
            return Err(Error::Integration(format!("exceeded {} steps at t = {time}", tol.max_steps)));
        }
        steps += 1;
        h = h.min(t - time);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = x[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += kj[i] * (h * a);
                    }
                }
                stage[i] = acc;
            }
            op.apply_vec(&stage, &mut k[s]);
            if s == 6 {
                x_new.copy_from_slice(&stage);
            }
        }
        let mut err = 0.0f64;
        for i in 0..n {
            let mut e = ZERO;
            for s in 0..7 {
                e += k[s][i] * (h * (B5[s] - B4[s]));
            }
            let scale = tol.atol + tol.rtol * x[i].norm().max(x_new[i].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            return Err(Error::Integration("non-finite error estimate".into()));
        }
        if err <= 1.0 {
            time += h;
            std::mem::swap(&mut x, &mut x_new);
            k.swap(0, 6);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * t {
            return Err(Error::Integration(format!("step size underflow at t = {time}")));
        }
    }
    Ok(x)
}
