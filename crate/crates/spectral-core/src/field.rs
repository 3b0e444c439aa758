use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::Grid;

/// Real samples on an untwisted grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    grid: Grid,
    data: Vec<f64>,
}

/// Complex samples on a possibly twisted grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    data: Vec<Complex64>,
}

fn check_len(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.n() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid of {} points",
            len,
            grid.n()
        )));
    }
    Ok(())
}

impl RealField {
    pub fn new(grid: Grid, data: Vec<f64>) -> Result<Self> {
        check_len(&grid, data.len())?;
        if grid.is_twisted() {
            return invalid("real fields live on untwisted grids");
        }
        if data.iter().any(|v| !v.is_finite()) {
            return invalid("non-finite sample in real field");
        }
        Ok(RealField { grid, data })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let data = grid.points().into_iter().map(f).collect();
        Self::new(grid, data)
    }

    pub fn zeros(grid: Grid) -> Result<Self> {
        let n = grid.n();
        Self::new(grid, vec![0.0; n])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn data(&self) -> &[f64] {
        &self.data
    }
    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn derivative(&self, order: u32) -> Result<RealField> {
        let d = self.grid.derivative_real(&self.data, order)?;
        Ok(RealField { grid: self.grid.clone(), data: d })
    }

    pub fn integrate(&self) -> f64 {
        self.grid.integrate(&self.data)
    }

    pub fn sobolev_norm(&self, s: u32) -> Result<f64> {
        self.grid.sobolev_norm(&self.data, s)
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.dx() * self.data.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn shift(&self, a: f64) -> RealField {
        RealField { grid: self.grid.clone(), data: self.grid.shift_real(&self.data, a) }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise linear combination `a * self + b * other`.
    pub fn axpby(&self, a: f64, other: &RealField, b: f64) -> Result<RealField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("axpby on different grids".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        Ok(RealField { grid: self.grid.clone(), data })
    }
}

impl ComplexField {
    pub fn new(grid: Grid, data: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, data.len())?;
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return invalid("non-finite sample in complex field");
        }
        Ok(ComplexField { grid, data })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let data = grid.points().into_iter().map(f).collect();
        Self::new(grid, data)
    }

    pub fn constant(grid: Grid, value: Complex64) -> Result<Self> {
        let n = grid.n();
        Self::new(grid, vec![value; n])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn derivative(&self, order: u32) -> Result<ComplexField> {
        let d = self.grid.derivative(&self.data, order)?;
        Ok(ComplexField { grid: self.grid.clone(), data: d })
    }

    pub fn shift(&self, a: f64) -> ComplexField {
        ComplexField { grid: self.grid.clone(), data: self.grid.shift(&self.data, a) }
    }

    pub fn min_abs(&self) -> f64 {
        self.data.iter().fold(f64::INFINITY, |m, z| m.min(z.norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `1 - |u|^2`.
    pub fn eta(&self) -> Vec<f64> {
        self.data.iter().map(|z| 1.0 - z.norm_sqr()).collect()
    }

    /// `sqrt(dx * sum |u - v|^2)`.
    pub fn l2_distance(&self, other: &ComplexField) -> Result<f64> {
        if !self.grid.same_geometry(&other.grid) {
            return Err(Error::GridMismatch("distance between different grids".into()));
        }
        let s: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.grid.dx()).sqrt())
    }

    pub fn sup_distance(&self, other: &ComplexField) -> Result<f64> {
        if !self.grid.same_geometry(&other.grid) {
            return Err(Error::GridMismatch("distance between different grids".into()));
        }
        Ok(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }
}

/// Real inner product on the complex plane, `<a, b> = Re(a conj(b))`.
pub fn real_dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}
