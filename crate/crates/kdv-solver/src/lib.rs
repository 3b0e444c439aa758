//! Pseudospectral integration of `v_τ + v_xxx + v v_x = 0` on periodic grids.

use spectral_core::{Complex64, Error, Grid, RealField, Result};

#[derive(Clone, Debug)]
pub struct KdvState {
    pub v: RealField,
    pub tau: f64,
}

impl KdvState {
    pub fn new(v: RealField, tau: f64) -> Self {
        KdvState { v, tau }
    }
}

/// `3 / cosh²(x/2)`, the unit-speed soliton.
pub fn kdv_soliton(x: f64) -> f64 {
    3.0 / (x / 2.0).cosh().powi(2)
}

/// Integrating-factor RK4 stepper; the quadratic term is dealiased on a grid of
/// twice the size.
#[derive(Clone)]
pub struct KdvStepper {
    grid: Grid,
    fine: Grid,
    dtau: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    // -i kappa / 2, Nyquist removed
    flux: Vec<Complex64>,
}

impl KdvStepper {
    pub fn new(grid: &Grid, dtau: f64) -> Result<Self> {
        if !(dtau > 0.0 && dtau.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dtau}")));
        }
        if grid.is_twisted() {
            return Err(Error::InvalidArgument("KdV runs on untwisted grids".into()));
        }
        let n = grid.n();
        let k = grid.k();
        let half = k.iter().map(|k| Complex64::from_polar(1.0, 0.5 * dtau * k.powi(3))).collect();
        let full = k.iter().map(|k| Complex64::from_polar(1.0, dtau * k.powi(3))).collect();
        let flux = k
            .iter()
            .enumerate()
            .map(|(j, k)| if j == n / 2 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, -0.5 * k) })
            .collect();
        let fine = Grid::periodic(grid.length(), 2 * n)?;
        Ok(KdvStepper { grid: grid.clone(), fine, dtau, half, full, flux })
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    /// Coefficients of `-(v²)_x / 2`.
    fn nonlinear(&self, c: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.n();
        let h = n / 2;
        let big = 2 * n;
        let mut p = vec![Complex64::new(0.0, 0.0); big];
        p[..h].copy_from_slice(&c[..h]);
        p[big - h + 1..].copy_from_slice(&c[h + 1..]);
        self.fine.ifft(&mut p);
        for z in p.iter_mut() {
            *z = Complex64::new(4.0 * z.re * z.re, 0.0);
        }
        self.fine.fft(&mut p);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            if j == h {
                continue;
            }
            let src = if j < h { j } else { big - (n - j) };
            out[j] = 0.5 * p[src] * self.flux[j];
        }
        out
    }

    fn step_coefficients(&self, c: &mut [Complex64]) {
        let h = self.dtau;
        let e = &self.half;
        let e2 = &self.full;
        let a: Vec<Complex64> = self.nonlinear(c).into_iter().map(|z| h * z).collect();
        let tmp: Vec<Complex64> = (0..c.len()).map(|j| e[j] * (c[j] + 0.5 * a[j])).collect();
        let b: Vec<Complex64> = self.nonlinear(&tmp).into_iter().map(|z| h * z).collect();
        let tmp: Vec<Complex64> = (0..c.len()).map(|j| e[j] * c[j] + 0.5 * b[j]).collect();
        let cc: Vec<Complex64> = self.nonlinear(&tmp).into_iter().map(|z| h * z).collect();
        let tmp: Vec<Complex64> = (0..c.len()).map(|j| e2[j] * c[j] + e[j] * cc[j]).collect();
        let d: Vec<Complex64> = self.nonlinear(&tmp).into_iter().map(|z| h * z).collect();
        for j in 0..c.len() {
            c[j] = e2[j] * c[j] + (e2[j] * a[j] + 2.0 * e[j] * (b[j] + cc[j]) + d[j]) / 6.0;
        }
    }

    pub fn run(&self, v: &RealField, steps: usize, tau0: f64) -> Result<RealField> {
        let mut c = self.grid.real_coefficients(v.data());
        for s in 0..steps {
            self.step_coefficients(&mut c);
            if c.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::NumericalBlowup { t: tau0 + (s + 1) as f64 * self.dtau, max_abs: f64::INFINITY });
            }
        }
        let mut u = c;
        self.grid.ifft(&mut u);
        RealField::new(self.grid.clone(), u.into_iter().map(|z| z.re).collect())
    }
}

pub fn kdv_step(state: &KdvState, dtau: f64) -> Result<KdvState> {
    let st = KdvStepper::new(state.v.grid(), dtau)?;
    Ok(KdvState { v: st.run(&state.v, 1, state.tau)?, tau: state.tau + dtau })
}

/// Evolves to `tau_final`, observing the initial state, each scheduled time (snapped to
/// the step grid) and the final state.
pub fn kdv_evolve_with(
    state: &KdvState,
    tau_final: f64,
    dtau: f64,
    schedule: &[f64],
    mut observe: impl FnMut(&KdvState) -> Result<()>,
) -> Result<KdvState> {
    if tau_final < state.tau {
        return Err(Error::InvalidArgument(format!(
            "final time {tau_final} precedes the state time {}",
            state.tau
        )));
    }
    observe(state)?;
    let span = tau_final - state.tau;
    if span == 0.0 {
        return Ok(state.clone());
    }
    let steps = (span / dtau - 1e-9).ceil().max(1.0) as usize;
    let st = KdvStepper::new(state.v.grid(), span / steps as f64)?;
    let mut marks: Vec<usize> = schedule
        .iter()
        .filter(|&&s| s > state.tau && s < tau_final)
        .map(|&s| ((s - state.tau) / st.dtau()).round() as usize)
        .filter(|&m| m > 0 && m < steps)
        .collect();
    marks.sort_unstable();
    marks.dedup();
    marks.push(steps);
    let mut done = 0;
    let mut current = state.clone();
    for m in marks {
        let v = st.run(&current.v, m - done, current.tau)?;
        done = m;
        let tau = if m == steps { tau_final } else { state.tau + m as f64 * st.dtau() };
        current = KdvState { v, tau };
        observe(&current)?;
    }
    Ok(current)
}

pub fn kdv_evolve(state: &KdvState, tau_final: f64, dtau: f64, schedule: &[f64]) -> Result<Vec<KdvState>> {
    let mut out = Vec::new();
    kdv_evolve_with(state, tau_final, dtau, schedule, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}

/// `E_0 .. E_3` of the KdV hierarchy.
pub fn kdv_invariants(v: &RealField) -> Result<[f64; 4]> {
    let g = v.grid();
    let d = g.derivatives_real(v.data(), 3)?;
    let int = |f: &dyn Fn(usize) -> f64| g.dx() * (0..g.n()).map(f).sum::<f64>();
    let e0 = int(&|i| 0.5 * d[0][i].powi(2));
    let e1 = int(&|i| 0.5 * d[1][i].powi(2) - d[0][i].powi(3) / 6.0);
    let e2 = int(&|i| {
        let (u, u1, u2) = (d[0][i], d[1][i], d[2][i]);
        0.5 * u2 * u2 - 5.0 / 6.0 * u * u1 * u1 + 5.0 / 72.0 * u.powi(4)
    });
    let e3 = int(&|i| {
        let (u, u1, u2, u3) = (d[0][i], d[1][i], d[2][i], d[3][i]);
        0.5 * u3 * u3 - 7.0 / 6.0 * u * u2 * u2 + 35.0 / 36.0 * u * u * u1 * u1 - 7.0 / 216.0 * u.powi(5)
    });
    Ok([e0, e1, e2, e3])
}

/// Terms of `‖∂ᵏv‖² ≤ K (‖v‖²_{H^{k-1}} + |E_k|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoercivityReport {
    pub k: usize,
    /// `‖∂ᵏv‖²`
    pub top: f64,
    /// `‖v‖²_{H^{k-1}}`
    pub lower: f64,
    /// `|E_k(v)|`
    pub energy: f64,
}

impl CoercivityReport {
    /// Smallest `K` that works for this field.
    pub fn ratio(&self) -> f64 {
        let rhs = self.lower + self.energy;
        if rhs == 0.0 {
            0.0
        } else {
            self.top / rhs
        }
    }

    /// `(8/3)|E_1| + 3^{-4/3}‖v‖^{10/3} - ‖v'‖²`, nonnegative for fields with a zero
    /// (from `‖v‖²_∞ ≤ ‖v‖ ‖v'‖` and Young's inequality).
    pub fn explicit_margin(&self) -> Option<f64> {
        (self.k == 1).then(|| {
            8.0 / 3.0 * self.energy + 3f64.powf(-4.0 / 3.0) * self.lower.powf(5.0 / 3.0) - self.top
        })
    }
}

pub fn kdv_coercivity_check(v: &RealField, k: usize) -> Result<CoercivityReport> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!("coercivity order must be 1..=3, got {k}")));
    }
    let top = v.derivative(k as u32)?.l2_norm().powi(2);
    let lower = v.sobolev_norm(k as u32 - 1)?.powi(2);
    let energy = kdv_invariants(v)?[k].abs();
    Ok(CoercivityReport { k, top, lower, energy })
}

/// A single constant covering every member of the family.
pub fn fitted_constant(reports: &[CoercivityReport]) -> f64 {
    reports.iter().map(CoercivityReport::ratio).fold(0.0, f64::max)
}

/// Location of the maximum, refined by a parabola through the neighbouring samples.
pub fn peak_location(v: &RealField) -> f64 {
    let d = v.data();
    let n = d.len();
    let (i, _) = d
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |(bi, bv), (j, &y)| if y > bv { (j, y) } else { (bi, bv) });
    let (a, b, c) = (d[(i + n - 1) % n], d[i], d[(i + 1) % n]);
    let den = a - 2.0 * b + c;
    let off = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
    v.grid().spec().x(i) + off * v.grid().dx()
}
