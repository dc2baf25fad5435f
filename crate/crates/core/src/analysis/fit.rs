use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{storage::Owned, DVector, Dyn, OMatrix, OVector, U4};

use super::spectrum::{SpectrumColumn, SpectrumResult};
use crate::error::{Error, Result};

/// Fit window half-size in units of the initial half-width estimate.
pub const FIT_WINDOW: f64 = 3.0;

/// `amplitude * hwhm^2 / ((x - centre)^2 + hwhm^2) + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub centre: f64,
    pub hwhm: f64,
    pub amplitude: f64,
    pub offset: f64,
}

impl LorentzianFit {
    pub fn eval(&self, x: f64) -> f64 {
        let w2 = self.hwhm * self.hwhm;
        self.amplitude * w2 / ((x - self.centre).powi(2) + w2) + self.offset
    }
}

/// Fits of the two sidebands, ordered by line position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandWidths {
    pub high: LorentzianFit,
    pub low: LorentzianFit,
}

impl SidebandWidths {
    /// `(hwhm_high, hwhm_low)`
    pub fn widths(&self) -> (f64, f64) {
        (self.high.hwhm, self.low.hwhm)
    }
}

struct Problem<'a> {
    x: &'a [f64],
    y: &'a [f64],
    p: OVector<f64, U4>,
}

impl Problem<'_> {
    fn model(&self) -> LorentzianFit {
        LorentzianFit {
            centre: self.p[0],
            hwhm: self.p[1],
            amplitude: self.p[2],
            offset: self.p[3],
        }
    }
}

impl LeastSquaresProblem<f64, Dyn, U4> for Problem<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, U4>;
    type ParameterStorage = Owned<f64, U4>;

    fn set_params(&mut self, p: &OVector<f64, U4>) {
        self.p.copy_from(p);
    }

    fn params(&self) -> OVector<f64, U4> {
        self.p
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        let m = self.model();
        Some(DVector::from_iterator(
            self.x.len(),
            self.x.iter().zip(self.y).map(|(&x, &y)| m.eval(x) - y),
        ))
    }

    fn jacobian(&self) -> Option<OMatrix<f64, Dyn, U4>> {
        let m = self.model();
        let w = m.hwhm;
        let mut j = OMatrix::<f64, Dyn, U4>::zeros(self.x.len());
        for (r, &x) in self.x.iter().enumerate() {
            let u = x - m.centre;
            let den = u * u + w * w;
            let shape = w * w / den;
            j[(r, 0)] = m.amplitude * 2.0 * u * w * w / (den * den);
            j[(r, 1)] = m.amplitude * 2.0 * w * u * u / (den * den);
            j[(r, 2)] = shape;
            j[(r, 3)] = 1.0;
        }
        Some(j)
    }
}

/// Half width of the peak at `peak` from its half-maximum crossings, using
/// whichever side crosses first if only one does.
fn half_max_width(x: &[f64], y: &[f64], peak: usize) -> Option<f64> {
    let half = 0.5 * y[peak];
    let cross = |mut k: usize, step: isize| -> Option<f64> {
        loop {
            let next = k.checked_add_signed(step).filter(|&n| n < y.len())?;
            if y[next] < half {
                let t = (y[k] - half) / (y[k] - y[next]);
                return Some((x[k] + t * (x[next] - x[k]) - x[peak]).abs());
            }
            k = next;
        }
    };
    match (cross(peak, 1), cross(peak, -1)) {
        (Some(r), Some(l)) => Some(0.5 * (r + l)),
        (Some(w), None) | (None, Some(w)) => Some(w),
        (None, None) => None,
    }
}

/// Least-squares Lorentzian-plus-constant fit to the line whose maximum is at
/// index `peak`, over a window of [`FIT_WINDOW`] initial half-widths.
pub fn fit_lorentzian(x: &[f64], y: &[f64], peak: usize) -> Result<LorentzianFit> {
    if x.len() != y.len() || peak >= x.len() {
        return Err(Error::FitFailed(format!("peak index {peak} outside data of length {}", x.len())));
    }
    if !(y[peak] > 0.0) {
        return Err(Error::FitFailed(format!("peak value {} is not positive", y[peak])));
    }
    let w0 = half_max_width(x, y, peak).ok_or_else(|| Error::FitFailed("no half-maximum crossing".into()))?;
    let (lo, hi) = (x[peak] - FIT_WINDOW * w0, x[peak] + FIT_WINDOW * w0);
    let idx: Vec<usize> = (0..x.len()).filter(|&k| x[k] >= lo && x[k] <= hi).collect();
    if idx.len() < 8 {
        return Err(Error::FitFailed(format!("only {} points inside the fit window", idx.len())));
    }
    let (first, last) = (idx[0], idx[idx.len() - 1]);
    let problem = Problem {
        x: &x[first..=last],
        y: &y[first..=last],
        p: OVector::<f64, U4>::new(x[peak], w0, y[peak], 0.0),
    };
    let (solved, report) = LevenbergMarquardt::new().minimize(problem);
    if !report.termination.was_successful() {
        return Err(Error::FitFailed(format!("{:?}", report.termination)));
    }
    let mut fit = solved.model();
    fit.hwhm = fit.hwhm.abs();
    if !(fit.hwhm.is_finite() && fit.centre.is_finite() && fit.amplitude.is_finite()) {
        return Err(Error::FitFailed("non-finite parameters".into()));
    }
    Ok(fit)
}

/// Indices of the two highest local maxima, in ascending position.
fn two_peaks(y: &[f64]) -> Option<(usize, usize)> {
    let mut maxima: Vec<usize> = (1..y.len().saturating_sub(1))
        .filter(|&k| y[k] > y[k - 1] && y[k] >= y[k + 1])
        .collect();
    maxima.sort_by(|&a, &b| y[b].total_cmp(&y[a]));
    match maxima[..] {
        [a, b, ..] => Some((a.min(b), a.max(b))),
        _ => None,
    }
}

/// Fits both sidebands of a doublet.
///
/// Fails with [`Error::Unresolved`] when the fitted line separation is below
/// three times the summed half-widths.
pub fn sideband_linewidths(spectrum: &SpectrumResult, which: SpectrumColumn) -> Result<SidebandWidths> {
    let x = spectrum.omegas();
    let y = spectrum.column(which);
    let (lo, hi) = two_peaks(&y).ok_or_else(|| Error::FitFailed("fewer than two peaks".into()))?;
    let low = fit_lorentzian(&x, &y, lo)?;
    let high = fit_lorentzian(&x, &y, hi)?;
    let separation = (high.centre - low.centre).abs();
    let widths = low.hwhm + high.hwhm;
    if separation < 3.0 * widths {
        return Err(Error::Unresolved { separation, widths });
    }
    Ok(SidebandWidths { high, low })
}
