use rayon::prelude::*;

use crate::dynamics::steady_state;
use crate::error::{Error, Result};
use crate::model::{Generator, ModelParams};

/// Bisection stops once the bracket is narrower than this.
pub const BOUNDARY_TOLERANCE: f64 = 0.05;

/// Steady-state observables at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    /// `rho22 - rho00`
    pub d20: f64,
    /// `rho22 - rho11`
    pub d21: f64,
    pub re_coh: f64,
    pub im_coh: f64,
    pub p22: f64,
    pub p11: f64,
    pub p00: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn column(&self, f: impl Fn(&SweepRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    /// Largest `|p00 + p11 + p22 - 1|` over the rows.
    pub fn normalization_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.p00 + r.p11 + r.p22 - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|k| if k + 1 == count { stop } else { start + step * k as f64 })
                .collect()
        }
    }
}

/// Observables of the unique steady state at `params.delta`.
pub fn steady_row(params: &ModelParams, generator: Generator) -> Result<SweepRow> {
    let l = generator.build(params)?;
    let rho = steady_state(&l)?.unique()?;
    let coh = rho.get(0, 1);
    let (p00, p11, p22) = (rho.population(0), rho.population(1), rho.population(2));
    Ok(SweepRow {
        delta: params.delta,
        d20: p22 - p00,
        d21: p22 - p11,
        re_coh: coh.re,
        im_coh: coh.im,
        p22,
        p11,
        p00,
    })
}

/// Steady-state sweep over cavity detunings; rows follow the grid order.
pub fn detuning_sweep(template: &ModelParams, generator: Generator, deltas: &[f64]) -> Result<SweepResult> {
    template.validate()?;
    let rows = deltas
        .par_iter()
        .enumerate()
        .map(|(i, &d)| steady_row(&template.with_delta(d), generator).map_err(|e| Error::at(i, d, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Population difference whose zero crossings are located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Difference {
    /// `rho22 - rho00`
    D20,
    /// `rho22 - rho11`
    D21,
}

impl Difference {
    pub fn of(self, row: &SweepRow) -> f64 {
        match self {
            Difference::D20 => row.d20,
            Difference::D21 => row.d21,
        }
    }
}

/// Zero crossings of a population difference inside `[lo, hi]`.
///
/// The bracket is scanned on `scan_points` points; each sign change is then
/// bisected until the bracket is narrower than `tolerance`, and its midpoint
/// is returned.
pub fn inversion_boundaries(
    template: &ModelParams,
    generator: Generator,
    which: Difference,
    (lo, hi): (f64, f64),
    scan_points: usize,
    tolerance: f64,
) -> Result<Vec<f64>> {
    if !(lo < hi) || scan_points < 2 || !(tolerance > 0.0) {
        return Err(Error::param("bracket", format!("need lo < hi, >= 2 scan points, tolerance > 0; got [{lo}, {hi}]")));
    }
    let grid = linear_grid(lo, hi, scan_points);
    let sweep = detuning_sweep(template, generator, &grid)?;
    let values = sweep.column(|r| which.of(r));
    let f = |d: f64| steady_row(&template.with_delta(d), generator).map(|r| which.of(&r));

    let mut roots = Vec::new();
    for k in 0..grid.len() - 1 {
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let (mut fa, fb) = (values[k], values[k + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        while b - a > tolerance {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    if values.last() == Some(&0.0) {
        roots.push(hi);
    }
    if roots.is_empty() {
        return Err(Error::NoSignChange { lo, hi });
    }
    Ok(roots)
}
