use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};

/// Highest derivative order accepted by the differentiation routines.
pub const MAX_DERIVATIVE_ORDER: u32 = 8;

/// Geometry of a periodic box `[-L/2, L/2)` with `n` points.
///
/// A nonzero `twist` makes complex fields quasi-periodic:
/// `u(x + L) = e^{i twist} u(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub length: f64,
    pub n: usize,
    pub twist: f64,
}

impl GridSpec {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        Self::twisted(length, n, 0.0)
    }

    pub fn twisted(length: f64, n: usize, twist: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return invalid(format!("grid length must be positive, got {length}"));
        }
        if n < 8 || !n.is_power_of_two() {
            return invalid(format!("grid size must be a power of two >= 8, got {n}"));
        }
        if !twist.is_finite() {
            return invalid("twist must be finite");
        }
        Ok(GridSpec { length, n, twist })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + self.dx() * j as f64
    }
}

struct Plans {
    k: Vec<f64>,
    kappa: Vec<f64>,
    phase: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

/// A grid together with its FFT plans and wavenumber tables. Cheap to clone.
#[derive(Clone)]
pub struct Grid {
    spec: GridSpec,
    plans: Arc<Plans>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("spec", &self.spec).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

/// Signed integer frequency of FFT slot `j` (numpy `fftfreq` order).
pub fn mode_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        let spec = GridSpec::twisted(spec.length, spec.n, spec.twist)?;
        let n = spec.n;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let k: Vec<f64> = (0..n)
            .map(|j| 2.0 * PI * mode_index(j, n) as f64 / spec.length)
            .collect();
        let shift = spec.twist / spec.length;
        let kappa = k.iter().map(|k| k + shift).collect();
        let phase = (0..n)
            .map(|j| Complex64::from_polar(1.0, shift * (spec.x(j) + 0.5 * spec.length)))
            .collect();
        Ok(Grid {
            spec,
            plans: Arc::new(Plans { k, kappa, phase, fwd, inv }),
        })
    }

    pub fn periodic(length: f64, n: usize) -> Result<Self> {
        Self::new(GridSpec::new(length, n)?)
    }

    pub fn twisted(length: f64, n: usize, twist: f64) -> Result<Self> {
        Self::new(GridSpec::twisted(length, n, twist)?)
    }

    /// Same length and size, different twist.
    pub fn with_twist(&self, twist: f64) -> Result<Self> {
        if twist == self.spec.twist {
            return Ok(self.clone());
        }
        Self::twisted(self.spec.length, self.spec.n, twist)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }
    pub fn n(&self) -> usize {
        self.spec.n
    }
    pub fn length(&self) -> f64 {
        self.spec.length
    }
    pub fn twist(&self) -> f64 {
        self.spec.twist
    }
    pub fn dx(&self) -> f64 {
        self.spec.dx()
    }
    pub fn is_twisted(&self) -> bool {
        self.spec.twist != 0.0
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.spec.x(j)).collect()
    }

    /// Untwisted wavenumbers `2 pi m / L`.
    pub fn k(&self) -> &[f64] {
        &self.plans.k
    }

    /// Effective wavenumbers `k + twist / L`.
    pub fn kappa(&self) -> &[f64] {
        &self.plans.kappa
    }

    /// Largest |kappa| on the grid.
    pub fn kappa_max(&self) -> f64 {
        self.plans.kappa.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    /// `e^{i twist (x + L/2) / L}` sampled on the grid.
    pub fn phase(&self) -> &[Complex64] {
        &self.plans.phase
    }

    /// Unnormalized forward DFT in place.
    pub fn fft(&self, buf: &mut [Complex64]) {
        self.plans.fwd.process(buf);
    }

    /// Normalized inverse DFT in place.
    pub fn ifft(&self, buf: &mut [Complex64]) {
        self.plans.inv.process(buf);
        let s = 1.0 / self.n() as f64;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    /// Fourier coefficients of the periodic factor `u * conj(phase)`.
    pub fn coefficients(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut c: Vec<Complex64> = if self.is_twisted() {
            u.iter().zip(self.phase()).map(|(a, p)| a * p.conj()).collect()
        } else {
            u.to_vec()
        };
        self.fft(&mut c);
        c
    }

    /// Inverse of [`Grid::coefficients`].
    pub fn synthesize(&self, mut c: Vec<Complex64>) -> Vec<Complex64> {
        self.ifft(&mut c);
        if self.is_twisted() {
            c.iter_mut().zip(self.phase()).for_each(|(a, p)| *a *= p);
        }
        c
    }

    pub fn real_coefficients(&self, f: &[f64]) -> Vec<Complex64> {
        let mut c: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft(&mut c);
        c
    }

    fn real_synthesize(&self, mut c: Vec<Complex64>) -> Vec<f64> {
        self.ifft(&mut c);
        c.into_iter().map(|z| z.re).collect()
    }

    fn check_order(order: u32) -> Result<()> {
        if order == 0 || order > MAX_DERIVATIVE_ORDER {
            return invalid(format!(
                "derivative order must be in 1..={MAX_DERIVATIVE_ORDER}, got {order}"
            ));
        }
        Ok(())
    }

    fn multiplier(&self, j: usize, order: u32, kappa: f64) -> Complex64 {
        // Odd derivatives drop the unpaired Nyquist mode.
        if order % 2 == 1 && j == self.n() / 2 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, kappa).powu(order)
    }

    fn apply(&self, c: &[Complex64], order: u32, kappa: &[f64]) -> Vec<Complex64> {
        c.iter()
            .zip(kappa)
            .enumerate()
            .map(|(j, (a, &k))| a * self.multiplier(j, order, k))
            .collect()
    }

    /// `d^order u / dx^order` with the effective wavenumbers.
    pub fn derivative(&self, u: &[Complex64], order: u32) -> Result<Vec<Complex64>> {
        Self::check_order(order)?;
        let c = self.coefficients(u);
        Ok(self.synthesize(self.apply(&c, order, self.kappa())))
    }

    /// `[u, u', ..., u^(max_order)]`, sharing one forward transform.
    pub fn derivatives(&self, u: &[Complex64], max_order: u32) -> Result<Vec<Vec<Complex64>>> {
        if max_order > MAX_DERIVATIVE_ORDER {
            return invalid(format!("derivative order {max_order} exceeds {MAX_DERIVATIVE_ORDER}"));
        }
        let c = self.coefficients(u);
        let mut out = vec![u.to_vec()];
        for order in 1..=max_order {
            out.push(self.synthesize(self.apply(&c, order, self.kappa())));
        }
        Ok(out)
    }

    /// Derivative of a real periodic sample vector (twist ignored).
    pub fn derivative_real(&self, f: &[f64], order: u32) -> Result<Vec<f64>> {
        Self::check_order(order)?;
        let c = self.real_coefficients(f);
        Ok(self.real_synthesize(self.apply(&c, order, self.k())))
    }

    pub fn derivatives_real(&self, f: &[f64], max_order: u32) -> Result<Vec<Vec<f64>>> {
        if max_order > MAX_DERIVATIVE_ORDER {
            return invalid(format!("derivative order {max_order} exceeds {MAX_DERIVATIVE_ORDER}"));
        }
        let c = self.real_coefficients(f);
        let mut out = vec![f.to_vec()];
        for order in 1..=max_order {
            out.push(self.real_synthesize(self.apply(&c, order, self.k())));
        }
        Ok(out)
    }

    /// Rectangle rule `dx * sum f`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.dx() * f.iter().sum::<f64>()
    }

    /// Discrete `H^s` norm with multiplier `(1 + k^2)^(s/2)`, `s <= 4`.
    pub fn sobolev_norm(&self, f: &[f64], s: u32) -> Result<f64> {
        if s > 4 {
            return invalid(format!("Sobolev index must be <= 4, got {s}"));
        }
        let c = self.real_coefficients(f);
        let n = self.n() as f64;
        let sum: f64 = c
            .iter()
            .zip(self.k())
            .map(|(a, k)| (1.0 + k * k).powi(s as i32) * a.norm_sqr())
            .sum();
        Ok((sum * self.length() / (n * n)).sqrt())
    }

    /// `u(x - a)`, respecting the twist.
    pub fn shift(&self, u: &[Complex64], a: f64) -> Vec<Complex64> {
        let c = self.coefficients(u);
        let c = c
            .iter()
            .zip(self.kappa())
            .map(|(z, k)| z * Complex64::from_polar(1.0, -k * a))
            .collect();
        self.synthesize(c)
    }

    /// `f(x - a)` for a real periodic sample vector.
    pub fn shift_real(&self, f: &[f64], a: f64) -> Vec<f64> {
        let c = self.real_coefficients(f);
        let c = c
            .iter()
            .zip(self.k())
            .map(|(z, k)| z * Complex64::from_polar(1.0, -k * a))
            .collect();
        self.real_synthesize(c)
    }

    /// Splits `f = mean + g'` and returns `(mean, g)` with `g` of zero mean.
    pub fn antiderivative_real(&self, f: &[f64]) -> (f64, Vec<f64>) {
        let mut c = self.real_coefficients(f);
        let mean = c[0].re / self.n() as f64;
        let nyq = self.n() / 2;
        for (j, (z, &k)) in c.iter_mut().zip(self.k()).enumerate() {
            *z = if j == 0 || j == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                *z / Complex64::new(0.0, k)
            };
        }
        (mean, self.real_synthesize(c))
    }

    /// Largest |mode index| whose coefficient exceeds `tol * max`.
    pub fn bandwidth(&self, u: &[Complex64], tol: f64) -> usize {
        let c = self.coefficients(u);
        let peak = c.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if peak == 0.0 {
            return 0;
        }
        c.iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > tol * peak)
            .map(|(j, _)| mode_index(j, self.n()).unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Zeroes every mode with |index| above `keep`.
    pub fn truncate(&self, u: &[Complex64], keep: usize) -> Vec<Complex64> {
        let mut c = self.coefficients(u);
        let n = self.n();
        for (j, z) in c.iter_mut().enumerate() {
            if mode_index(j, n).unsigned_abs() as usize > keep {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        self.synthesize(c)
    }

    /// Band-limited interpolation onto a grid `factor` times finer (same box, same twist).
    pub fn upsample(&self, u: &[Complex64], factor: usize) -> Result<(Grid, Vec<Complex64>)> {
        if factor == 0 || !factor.is_power_of_two() {
            return invalid(format!("upsampling factor must be a power of two, got {factor}"));
        }
        let fine = Grid::twisted(self.length(), self.n() * factor, self.twist())?;
        if factor == 1 {
            return Ok((fine, u.to_vec()));
        }
        let c = self.coefficients(u);
        let n = self.n();
        let big = fine.n();
        let mut cc = vec![Complex64::new(0.0, 0.0); big];
        let h = n / 2;
        cc[..h].copy_from_slice(&c[..h]);
        // Split the Nyquist coefficient symmetrically.
        cc[h] = 0.5 * c[h];
        cc[big - h] = 0.5 * c[h];
        cc[big - h + 1..].copy_from_slice(&c[h + 1..]);
        let s = factor as f64;
        cc.iter_mut().for_each(|z| *z *= s);
        let v = fine.synthesize(cc);
        Ok((fine, v))
    }

    /// Checks that another grid has the same geometry.
    pub fn same_geometry(&self, other: &Grid) -> bool {
        self.spec.n == other.spec.n && self.spec.length == other.spec.length
    }
}
