//! Split-step integration of `i u_t + u_xx = u (|u|^2 - 1)` on twisted periodic grids,
//! Madelung variables and exact initial data.

use std::f64::consts::SQRT_2;

use spectral_core::{real_dot, Complex64, ComplexField, Error, Grid, RealField, Result};

/// Default lower bound on `|psi|` for the Madelung lift.
pub const RHO_MIN: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct GpState {
    pub psi: ComplexField,
    pub t: f64,
}

impl GpState {
    pub fn new(psi: ComplexField, t: f64) -> Self {
        GpState { psi, t }
    }

    pub fn grid(&self) -> &Grid {
        self.psi.grid()
    }
}

/// Reusable Strang stepper for a fixed grid and time step.
#[derive(Clone)]
pub struct Stepper {
    grid: Grid,
    dt: f64,
    linear: Vec<Complex64>,
    conj_phase: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: &Grid, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        let linear = grid.kappa().iter().map(|k| Complex64::from_polar(1.0, -dt * k * k)).collect();
        let conj_phase = grid.phase().iter().map(|p| p.conj()).collect();
        Ok(Stepper { grid: grid.clone(), dt, linear, conj_phase })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn half_nonlinear(&self, u: &mut [Complex64]) {
        let h = 0.5 * self.dt;
        for z in u.iter_mut() {
            *z *= Complex64::from_polar(1.0, -h * (z.norm_sqr() - 1.0));
        }
    }

    /// One step on raw samples.
    pub fn step_in_place(&self, u: &mut [Complex64]) {
        self.half_nonlinear(u);
        let twisted = self.grid.is_twisted();
        if twisted {
            u.iter_mut().zip(&self.conj_phase).for_each(|(z, p)| *z *= p);
        }
        self.grid.fft(u);
        u.iter_mut().zip(&self.linear).for_each(|(z, e)| *z *= e);
        self.grid.ifft(u);
        if twisted {
            u.iter_mut().zip(self.grid.phase()).for_each(|(z, p)| *z *= p);
        }
        self.half_nonlinear(u);
    }

    pub fn run(&self, u: &mut [Complex64], steps: usize, t0: f64) -> Result<()> {
        for s in 0..steps {
            self.step_in_place(u);
            if u.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(blowup(u, t0 + (s + 1) as f64 * self.dt));
            }
        }
        Ok(())
    }
}

fn blowup(u: &[Complex64], t: f64) -> Error {
    let max_abs = u.iter().fold(0.0f64, |m, z| if z.norm().is_finite() { m.max(z.norm()) } else { f64::INFINITY });
    Error::NumericalBlowup { t, max_abs }
}

/// Accuracy-driven default step `min(1e-3, dx/8)`.
pub fn default_dt(grid: &Grid) -> f64 {
    (grid.dx() / 8.0).min(1e-3)
}

pub fn gp_step(state: &GpState, dt: f64) -> Result<GpState> {
    let stepper = Stepper::new(state.grid(), dt)?;
    let mut u = state.psi.data().to_vec();
    stepper.run(&mut u, 1, state.t)?;
    Ok(GpState { psi: ComplexField::new(state.grid().clone(), u)?, t: state.t + dt })
}

/// Evolves to `t_final`, calling `observe` on the initial state, on every scheduled
/// time (snapped to the nearest step) and on the final state.
pub fn gp_evolve_with(
    state: &GpState,
    t_final: f64,
    dt: f64,
    schedule: &[f64],
    mut observe: impl FnMut(&GpState) -> Result<()>,
) -> Result<GpState> {
    if t_final < state.t {
        return Err(Error::InvalidArgument(format!(
            "final time {t_final} precedes the state time {}",
            state.t
        )));
    }
    observe(state)?;
    let span = t_final - state.t;
    if span == 0.0 {
        return Ok(state.clone());
    }
    let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
    let stepper = Stepper::new(state.grid(), span / steps as f64)?;
    let mut marks: Vec<usize> = schedule
        .iter()
        .filter(|&&ts| ts > state.t && ts < t_final)
        .map(|&ts| ((ts - state.t) / stepper.dt()).round() as usize)
        .filter(|&m| m > 0 && m < steps)
        .collect();
    marks.sort_unstable();
    marks.dedup();
    marks.push(steps);
    let grid = state.grid().clone();
    let mut u = state.psi.data().to_vec();
    let mut done = 0;
    let mut current = state.clone();
    for m in marks {
        stepper.run(&mut u, m - done, state.t + done as f64 * stepper.dt())?;
        done = m;
        let t = if m == steps { t_final } else { state.t + m as f64 * stepper.dt() };
        current = GpState { psi: ComplexField::new(grid.clone(), u.clone())?, t };
        observe(&current)?;
    }
    Ok(current)
}

/// Trajectory of snapshots: initial state, scheduled times, final state.
pub fn gp_evolve(state: &GpState, t_final: f64, dt: f64, schedule: &[f64]) -> Result<Vec<GpState>> {
    let mut out = Vec::new();
    gp_evolve_with(state, t_final, dt, schedule, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MadelungPair {
    pub eta: RealField,
    pub phase_derivative: RealField,
    pub phase_base: f64,
}

impl MadelungPair {
    /// Rebuilds `sqrt(1 - eta) e^{i phi}` on a grid with the given twist.
    pub fn reconstruct(&self, twist: f64) -> Result<ComplexField> {
        let g = self.eta.grid();
        let (mean, p) = g.antiderivative_real(self.phase_derivative.data());
        let x0 = g.spec().x(0);
        let p0 = p[0];
        let data = g
            .points()
            .iter()
            .zip(&p)
            .zip(self.eta.data())
            .map(|((&x, &pj), &e)| {
                let phi = self.phase_base + mean * (x - x0) + pj - p0;
                Complex64::from_polar((1.0 - e).sqrt(), phi)
            })
            .collect();
        ComplexField::new(g.with_twist(twist)?, data)
    }
}

pub fn madelung(psi: &ComplexField) -> Result<MadelungPair> {
    madelung_with(psi, RHO_MIN)
}

pub fn madelung_with(psi: &ComplexField, rho_min: f64) -> Result<MadelungPair> {
    let min_abs = psi.min_abs();
    if min_abs < rho_min {
        return Err(Error::VacuumCrossing { min_abs, threshold: rho_min });
    }
    let g = psi.grid();
    let d = g.derivative(psi.data(), 1)?;
    let u = psi.data();
    let eta = u.iter().map(|z| 1.0 - z.norm_sqr()).collect();
    let phx = u
        .iter()
        .zip(&d)
        .map(|(z, dz)| real_dot(Complex64::i() * z, *dz) / z.norm_sqr())
        .collect();
    let real_grid = g.with_twist(0.0)?;
    Ok(MadelungPair {
        eta: RealField::new(real_grid.clone(), eta)?,
        phase_derivative: RealField::new(real_grid, phx)?,
        phase_base: u[0].arg(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolitonSpec {
    pub c: f64,
    pub x0: f64,
}

impl SolitonSpec {
    pub fn new(c: f64, x0: f64) -> Result<Self> {
        if !(0.0..SQRT_2).contains(&c) {
            return Err(Error::InvalidArgument(format!("soliton speed must lie in [0, sqrt 2), got {c}")));
        }
        Ok(SolitonSpec { c, x0 })
    }

    /// Speed with `epsilon = sqrt(2 - c^2)`.
    pub fn from_epsilon(epsilon: f64, x0: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= SQRT_2) {
            return Err(Error::InvalidArgument(format!("epsilon must lie in (0, sqrt 2], got {epsilon}")));
        }
        Self::new((2.0 - epsilon * epsilon).max(0.0).sqrt(), x0)
    }

    pub fn epsilon(&self) -> f64 {
        (2.0 - self.c * self.c).sqrt()
    }

    /// Phase jump `arg v(+inf) - arg v(-inf)`.
    pub fn twist(&self) -> f64 {
        2.0 * self.epsilon().atan2(self.c)
    }

    pub fn profile(&self, x: f64) -> Complex64 {
        let e = self.epsilon();
        Complex64::new(e / SQRT_2 * (0.5 * e * (x - self.x0)).tanh(), -self.c / SQRT_2)
    }

    /// A box of the given size carrying this soliton's twist.
    pub fn grid(&self, length: f64, n: usize) -> Result<Grid> {
        Grid::twisted(length, n, self.twist())
    }
}

/// Travelling wave `v_c(x - x0)`; `u(x, t) = v_c(x + ct)` solves the flow.
pub fn dark_soliton(spec: &SolitonSpec, grid: &Grid) -> Result<ComplexField> {
    let spec = SolitonSpec::new(spec.c, spec.x0)?;
    if (grid.twist() - spec.twist()).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "grid twist {} does not match the soliton phase jump {}",
            grid.twist(),
            spec.twist()
        )));
    }
    ComplexField::from_fn(grid.clone(), |x| spec.profile(x))
}

/// `sqrt(1 - eps^2 N / 6) exp(i eps Theta / (6 sqrt 2))` sampled at `x = eps * x_orig`.
///
/// `n0` and `theta_x` live on the slow grid; the result lives on the original grid of
/// length `L_slow / eps`, twisted by the total phase increase.
pub fn long_wave_data(n0: &RealField, theta_x: &RealField, epsilon: f64) -> Result<ComplexField> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let gs = n0.grid();
    if gs != theta_x.grid() {
        return Err(Error::GridMismatch("N and theta_x on different grids".into()));
    }
    let e2 = epsilon * epsilon;
    let m_min = n0.data().iter().fold(f64::INFINITY, |m, &v| m.min(1.0 - e2 * v / 6.0));
    if m_min < 0.25 {
        return Err(Error::InvalidArgument(format!(
            "1 - eps^2 N / 6 reaches {m_min} < 1/4 (profile too deep for this epsilon)"
        )));
    }
    let (mean, p) = gs.antiderivative_real(theta_x.data());
    let xl = gs.spec().x(0);
    let k = epsilon / (6.0 * SQRT_2);
    let data = gs
        .points()
        .iter()
        .zip(&p)
        .zip(n0.data())
        .map(|((&x, &pj), &nv)| {
            let theta = mean * (x - xl) + pj;
            Complex64::from_polar((1.0 - e2 * nv / 6.0).sqrt(), k * theta)
        })
        .collect();
    let grid = Grid::twisted(gs.length() / epsilon, gs.n(), k * mean * gs.length())?;
    ComplexField::new(grid, data)
}
