//! Initial data and trajectories shared by the runners.

use gp_solver::{dark_soliton, gp_evolve_with, long_wave_data, GpState, SolitonSpec};
use kdv_solver::{kdv_evolve_with, KdvState};
use slow_scaling::{original_time, to_slow_state, SlowState};
use spectral_core::{ComplexField, Grid, RealField, Result};

/// Dark soliton of parameter `eps` on the box whose slow image is `[-ls/2, ls/2)`.
pub fn soliton_psi(eps: f64, ls: f64, n: usize) -> Result<ComplexField> {
    let spec = SolitonSpec::from_epsilon(eps, 0.0)?;
    dark_soliton(&spec, &spec.grid(ls / eps, n)?)
}

/// `3 / cosh²(x/2)`
pub fn nu(x: f64) -> f64 {
    3.0 / (x / 2.0).cosh().powi(2)
}

/// Purely left-moving long-wave data `N⁰ = ∂ₓΘ⁰ = ν`.
pub fn left_moving_psi(eps: f64, ls: f64, n: usize) -> Result<ComplexField> {
    let g = Grid::periodic(ls, n)?;
    let v = RealField::from_fn(g, nu)?;
    long_wave_data(&v, &v, eps)
}

/// Slow snapshots of the GP flow at the requested slow times (ascending, ≥ 0).
///
/// Each segment is integrated separately so every snapshot lands exactly on its τ.
pub fn gp_slow_trajectory(psi: ComplexField, eps: f64, taus: &[f64], dt: f64) -> Result<Vec<SlowState>> {
    let mut state = GpState::new(psi, 0.0);
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let target = original_time(eps, tau);
        if target > state.t {
            state = gp_evolve_with(&state, target, dt, &[], |_| Ok(()))?;
        }
        out.push(to_slow_state(&state, eps)?);
    }
    Ok(out)
}

/// GP states at the requested original times, integrated segment by segment.
pub fn gp_states(psi: ComplexField, times: &[f64], dt: f64) -> Result<Vec<GpState>> {
    let mut state = GpState::new(psi, 0.0);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t > state.t {
            state = gp_evolve_with(&state, t, dt, &[], |_| Ok(()))?;
        }
        out.push(state.clone());
    }
    Ok(out)
}

/// KdV snapshots from `v0` at the requested τ.
pub fn kdv_trajectory(v0: &RealField, taus: &[f64], dtau: f64) -> Result<Vec<RealField>> {
    let mut state = KdvState::new(v0.clone(), 0.0);
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        if tau > state.tau {
            state = kdv_evolve_with(&state, tau, dtau, &[], |_| Ok(()))?;
        }
        out.push(state.v.clone());
    }
    Ok(out)
}

/// `∫x f / ∫f`
pub fn center_of_mass(f: &RealField) -> f64 {
    let x = f.grid().points();
    let a: f64 = f.data().iter().zip(&x).map(|(v, x)| v * x).sum();
    let b: f64 = f.data().iter().sum();
    a / b
}

/// Evenly spaced `k/m · top` for `k = 0..=m`.
pub fn uniform(top: f64, m: usize) -> Vec<f64> {
    (0..=m).map(|k| top * k as f64 / m as f64).collect()
}
