//! Long-wave rescaling of Gross-Pitaevskii fields: slow variables `(N, ∂ₓΘ)` in the
//! frame moving at the sound speed, their invariants and equation residuals.

use std::f64::consts::SQRT_2;

use gp_solver::{madelung, GpState};
use spectral_core::{ComplexField, Error, Grid, RealField, Result};

mod rescaled;

pub use rescaled::{
    energy_density, energy_minus_momentum_1, momentum_density, rescaled_invariants,
    rescaled_invariants_with, Formulas, Jet, Remainder,
};

/// `τ = ε³ t / (2√2)`
pub fn slow_time(epsilon: f64, t: f64) -> f64 {
    epsilon.powi(3) * t / (2.0 * SQRT_2)
}

/// `t = 2√2 τ / ε³`
pub fn original_time(epsilon: f64, tau: f64) -> f64 {
    2.0 * SQRT_2 * tau / epsilon.powi(3)
}

#[derive(Clone, Debug)]
pub struct SlowState {
    pub epsilon: f64,
    pub tau: f64,
    pub n: RealField,
    pub theta_x: RealField,
    pub m: RealField,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

impl SlowState {
    pub fn new(epsilon: f64, tau: f64, n: RealField, theta_x: RealField) -> Result<Self> {
        check_epsilon(epsilon)?;
        if n.grid() != theta_x.grid() {
            return Err(Error::GridMismatch("N and theta_x on different grids".into()));
        }
        let e2 = epsilon * epsilon;
        let m: Vec<f64> = n.data().iter().map(|v| 1.0 - e2 * v / 6.0).collect();
        if let Some(bad) = m.iter().find(|v| !(0.25..=4.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!("m = 1 - eps^2 N / 6 leaves [1/4, 4]: {bad}")));
        }
        let m = RealField::new(n.grid().clone(), m)?;
        Ok(SlowState { epsilon, tau, n, theta_x, m })
    }

    /// Identically zero state on `grid`.
    pub fn zero(epsilon: f64, grid: &Grid) -> Result<Self> {
        let z = RealField::zeros(grid.clone())?;
        Self::new(epsilon, 0.0, z.clone(), z)
    }

    pub fn grid(&self) -> &Grid {
        self.n.grid()
    }

    /// `(N + ∂ₓΘ)/2`
    pub fn u(&self) -> RealField {
        self.n.axpby(0.5, &self.theta_x, 0.5).expect("fields share a grid")
    }

    /// `(N - ∂ₓΘ)/2`
    pub fn v(&self) -> RealField {
        self.n.axpby(0.5, &self.theta_x, -0.5).expect("fields share a grid")
    }

    /// Pointwise `N, ∂N, .., ∂⁴N` and `∂ₓΘ, .., ∂ₓ⁴Θ`.
    pub fn jets(&self) -> Result<Vec<Jet>> {
        let g = self.grid();
        let dn = g.derivatives_real(self.n.data(), 4)?;
        let dt = g.derivatives_real(self.theta_x.data(), 3)?;
        Ok((0..g.n())
            .map(|i| Jet {
                n: std::array::from_fn(|j| dn[j][i]),
                t: std::array::from_fn(|j| dt[j][i]),
            })
            .collect())
    }
}

fn slow_grid(psi: &ComplexField, epsilon: f64) -> Result<Grid> {
    Grid::periodic(epsilon * psi.grid().length(), psi.grid().n())
}

/// Slow fields of `psi` at original time `t`: `N = (6/ε²) η(x/ε - √2 t)` and
/// `∂ₓΘ = (6√2/ε²) ∂φ(x/ε - √2 t)` on the grid of length `ε L`.
pub fn to_slow(psi: &ComplexField, epsilon: f64, t: f64) -> Result<SlowState> {
    check_epsilon(epsilon)?;
    let lift = madelung(psi)?;
    let g = slow_grid(psi, epsilon)?;
    let shift = SQRT_2 * t;
    let e2 = epsilon * epsilon;
    let scale = |f: &RealField, c: f64| -> Result<RealField> {
        let d = f.shift(shift).into_data().into_iter().map(|v| c * v).collect();
        RealField::new(g.clone(), d)
    };
    let n = scale(&lift.eta, 6.0 / e2)?;
    let theta_x = scale(&lift.phase_derivative, 6.0 * SQRT_2 / e2)?;
    SlowState::new(epsilon, slow_time(epsilon, t), n, theta_x)
}

pub fn to_slow_state(state: &GpState, epsilon: f64) -> Result<SlowState> {
    to_slow(&state.psi, epsilon, state.t)
}

/// Lab-frame long-wave fields `n = 6η/ε²` and `w = 12√2 ∂φ/ε²` as functions of `X = ε𝗑`
/// (no frame shift); they solve the free wave system in `s = εt` to leading order.
pub fn lab_fields(psi: &ComplexField, epsilon: f64) -> Result<(RealField, RealField)> {
    check_epsilon(epsilon)?;
    let lift = madelung(psi)?;
    let g = slow_grid(psi, epsilon)?;
    let e2 = epsilon * epsilon;
    let n = lift.eta.data().iter().map(|v| 6.0 * v / e2).collect();
    let w = lift.phase_derivative.data().iter().map(|v| 12.0 * SQRT_2 * v / e2).collect();
    Ok((RealField::new(g.clone(), n)?, RealField::new(g, w)?))
}

/// Centered τ-derivative of the slow pair.
#[derive(Clone, Debug)]
pub struct SlowRate {
    pub n: RealField,
    pub theta_x: RealField,
}

impl SlowRate {
    pub fn centered(before: &SlowState, after: &SlowState) -> Result<Self> {
        let dtau = after.tau - before.tau;
        if dtau <= 0.0 || dtau.is_nan() {
            return Err(Error::InvalidArgument(format!("snapshots not increasing in tau: {dtau}")));
        }
        if before.grid() != after.grid() {
            return Err(Error::GridMismatch("snapshots on different grids".into()));
        }
        let c = 1.0 / dtau;
        Ok(SlowRate {
            n: after.n.axpby(c, &before.n, -c)?,
            theta_x: after.theta_x.axpby(c, &before.theta_x, -c)?,
        })
    }

    pub fn zero(grid: &Grid) -> Result<Self> {
        let z = RealField::zeros(grid.clone())?;
        Ok(SlowRate { n: z.clone(), theta_x: z })
    }
}

fn l2(g: &Grid, f: &[f64]) -> f64 {
    (g.dx() * f.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// L² norms of the residuals of the exact slow hydrodynamic system, the phase
/// equation taken in its x-differentiated form.
pub fn slow_system_residual(s: &SlowState, rate: &SlowRate) -> Result<(f64, f64)> {
    let g = s.grid();
    if rate.n.grid() != g {
        return Err(Error::GridMismatch("rate and state on different grids".into()));
    }
    let e2 = s.epsilon * s.epsilon;
    let (n, th, m) = (s.n.data(), s.theta_x.data(), s.m.data());
    let dn = g.derivatives_real(n, 2)?;
    let dth = g.derivative_real(th, 1)?;
    let nt: Vec<f64> = n.iter().zip(th).map(|(a, b)| a * b).collect();
    let dnt = g.derivative_real(&nt, 1)?;
    let r1: Vec<f64> = (0..g.n())
        .map(|i| dn[1][i] - dth[i] + e2 / 2.0 * (0.5 * rate.n.data()[i] + dnt[i] / 3.0))
        .collect();
    let q: Vec<f64> = (0..g.n())
        .map(|i| {
            th[i] - n[i]
                + e2 / 2.0 * (dn[2][i] / m[i] + th[i] * th[i] / 6.0)
                + e2 * e2 * dn[1][i].powi(2) / (24.0 * m[i] * m[i])
        })
        .collect();
    let dq = g.derivative_real(&q, 1)?;
    let r2: Vec<f64> = (0..g.n()).map(|i| dq[i] + e2 / 4.0 * rate.theta_x.data()[i]).collect();
    Ok((l2(g, &r1), l2(g, &r2)))
}

/// `N∂³N/(6m) + ∂N∂²N/(3m²) + ε²(∂N)³/(36m³)`
pub fn remainder(s: &SlowState) -> Result<RealField> {
    let g = s.grid();
    let e2 = s.epsilon * s.epsilon;
    let d = g.derivatives_real(s.n.data(), 3)?;
    let r = (0..g.n())
        .map(|i| {
            let m = s.m.data()[i];
            d[0][i] * d[3][i] / (6.0 * m) + d[1][i] * d[2][i] / (3.0 * m * m)
                + e2 * d[1][i].powi(3) / (36.0 * m.powi(3))
        })
        .collect();
    RealField::new(g.clone(), r)
}

/// `-∂³V + (UV)'/3 + (V²)'/6 - ε²R`, the forcing of the KdV equation for `U`.
pub fn kdv_forcing(s: &SlowState) -> Result<RealField> {
    let g = s.grid();
    let e2 = s.epsilon * s.epsilon;
    let (u, v) = (s.u(), s.v());
    let v3 = g.derivative_real(v.data(), 3)?;
    let w: Vec<f64> = u
        .data()
        .iter()
        .zip(v.data())
        .map(|(a, b)| a * b / 3.0 + b * b / 6.0)
        .collect();
    let dw = g.derivative_real(&w, 1)?;
    let r = remainder(s)?;
    let f = (0..g.n()).map(|i| -v3[i] + dw[i] - e2 * r.data()[i]).collect();
    RealField::new(g.clone(), f)
}

/// `∂³U + U∂U`
fn kdv_spatial(u: &RealField) -> Result<Vec<f64>> {
    let g = u.grid();
    let d = g.derivatives_real(u.data(), 3)?;
    Ok((0..g.n()).map(|i| d[3][i] + d[0][i] * d[1][i]).collect())
}

/// KdV residual of `U` at one interior snapshot, by the two routes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConsistencyPoint {
    pub tau: f64,
    /// `‖∂τU + ∂³U + U∂U‖` with `∂τU` from centered differences.
    pub finite_difference: f64,
    /// `‖forcing‖` from the exact slow equation for `U`.
    pub forcing: f64,
    /// L² distance between the two pointwise residuals.
    pub route_gap: f64,
}

/// Residual series over the interior snapshots of a τ-ordered trajectory.
pub fn kdv_consistency_residual(trajectory: &[SlowState]) -> Result<Vec<ConsistencyPoint>> {
    let mut out = Vec::new();
    for w in trajectory.windows(3) {
        let (a, s, b) = (&w[0], &w[1], &w[2]);
        let g = s.grid();
        let rate = SlowRate::centered(a, b)?;
        let ut = rate.n.axpby(0.5, &rate.theta_x, 0.5)?;
        let sp = kdv_spatial(&s.u())?;
        let fd: Vec<f64> = ut.data().iter().zip(&sp).map(|(x, y)| x + y).collect();
        let forcing = kdv_forcing(s)?;
        let gap: Vec<f64> = fd.iter().zip(forcing.data()).map(|(a, b)| a - b).collect();
        out.push(ConsistencyPoint {
            tau: s.tau,
            finite_difference: l2(g, &fd),
            forcing: forcing.l2_norm(),
            route_gap: l2(g, &gap),
        });
    }
    Ok(out)
}

/// d'Alembert split of the free wave system into right- and left-going profiles.
#[derive(Clone, Debug)]
pub struct WaveDecomposition {
    pub n_plus: RealField,
    pub w_plus: RealField,
    pub n_minus: RealField,
    pub w_minus: RealField,
}

impl WaveDecomposition {
    pub fn n(&self) -> RealField {
        self.n_plus.axpby(1.0, &self.n_minus, 1.0).expect("profiles share a grid")
    }

    pub fn w(&self) -> RealField {
        self.w_plus.axpby(1.0, &self.w_minus, 1.0).expect("profiles share a grid")
    }
}

/// Free-wave solution at time `t` from `(N⁰, W⁰)`.
pub fn dalembert_solve(n0: &RealField, w0: &RealField, t: f64) -> Result<WaveDecomposition> {
    if n0.grid() != w0.grid() {
        return Err(Error::GridMismatch("N0 and W0 on different grids".into()));
    }
    let right = n0.axpby(0.5, w0, -0.25)?.shift(SQRT_2 * t);
    let left = n0.axpby(0.5, w0, 0.25)?.shift(-SQRT_2 * t);
    let w_plus = right.axpby(-2.0, &right, 0.0)?;
    let w_minus = left.axpby(2.0, &left, 0.0)?;
    Ok(WaveDecomposition { n_plus: right, w_plus, n_minus: left, w_minus })
}

/// `∂s(√2 n) - ∂X w` and `∂s w - 2√2 ∂X n`, L² norms, with time derivatives supplied.
pub fn wave_system_residual(
    n: &RealField,
    w: &RealField,
    n_s: &RealField,
    w_s: &RealField,
) -> Result<(f64, f64)> {
    let g = n.grid();
    let dn = n.derivative(1)?;
    let dw = w.derivative(1)?;
    let r1: Vec<f64> = (0..g.n()).map(|i| SQRT_2 * n_s.data()[i] - dw.data()[i]).collect();
    let r2: Vec<f64> = (0..g.n()).map(|i| w_s.data()[i] - 2.0 * SQRT_2 * dn.data()[i]).collect();
    Ok((l2(g, &r1), l2(g, &r2)))
}
