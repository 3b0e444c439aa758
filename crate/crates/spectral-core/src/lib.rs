//! Fourier grids for periodic and quasi-periodic fields on `[-L/2, L/2)`.

mod error;
mod field;
mod grid;
pub mod noise;

pub use error::{Error, Result};
pub use field::{real_dot, ComplexField, RealField};
pub use grid::{mode_index, Grid, GridSpec, MAX_DERIVATIVE_ORDER};
pub use num_complex::Complex64;

/// Derivative of either kind of field.
pub trait Differentiable: Sized {
    fn spectral_derivative(&self, order: u32) -> Result<Self>;
}

impl Differentiable for RealField {
    fn spectral_derivative(&self, order: u32) -> Result<Self> {
        self.derivative(order)
    }
}

impl Differentiable for ComplexField {
    fn spectral_derivative(&self, order: u32) -> Result<Self> {
        self.derivative(order)
    }
}

/// Least-squares slope of `ln y` against `ln x`, with the rms residual.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    (slope, (rss / n).sqrt())
}
