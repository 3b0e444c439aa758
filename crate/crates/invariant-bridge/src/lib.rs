//! Gap between `ℰ_k ± √2 𝒫_k` and the KdV invariant `E_{k-1}` of `(N ± ∂ₓΘ)/2`.

use std::f64::consts::SQRT_2;

use kdv_solver::kdv_invariants;
use slow_scaling::{rescaled_invariants_with, Formulas, Remainder, SlowState};
use spectral_core::{loglog_slope, Error, RealField, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BridgeReport {
    pub k: usize,
    pub sign: Sign,
    pub gap: f64,
    pub epsilon: f64,
    pub slope_fit: Option<f64>,
}

/// `(N ± ∂ₓΘ)/2`
pub fn riemann_component(s: &SlowState, sign: Sign) -> RealField {
    match sign {
        Sign::Plus => s.u(),
        Sign::Minus => s.v(),
    }
}

fn check_k(k: usize) -> Result<()> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidArgument(format!("bridge order must be 1..=4, got {k}")));
    }
    Ok(())
}

/// `ℰ_k ± √2 𝒫_k` with the chosen formulas and remainder treatment.
pub fn slow_combination(s: &SlowState, k: usize, sign: Sign, f: Formulas, rem: Remainder) -> Result<f64> {
    let (e, p) = rescaled_invariants_with(s, k, f, rem)?;
    Ok(e + sign.value() * SQRT_2 * p)
}

pub fn bridge_gap(s: &SlowState, k: usize, sign: Sign) -> Result<BridgeReport> {
    bridge_gap_with(s, k, sign, Remainder::Full)
}

pub fn bridge_gap_with(s: &SlowState, k: usize, sign: Sign, rem: Remainder) -> Result<BridgeReport> {
    check_k(k)?;
    let lhs = slow_combination(s, k, sign, Formulas::Corrected, rem)?;
    let rhs = kdv_invariants(&riemann_component(s, sign))?[k - 1];
    Ok(BridgeReport { k, sign, gap: (lhs - rhs).abs(), epsilon: s.epsilon, slope_fit: None })
}

/// Gaps over an ε sweep, each report carrying the log-log slope of gap against ε.
pub fn bridge_sweep(states: &[SlowState], k: usize, sign: Sign) -> Result<Vec<BridgeReport>> {
    let mut reps = states.iter().map(|s| bridge_gap(s, k, sign)).collect::<Result<Vec<_>>>()?;
    if reps.len() >= 2 {
        let eps: Vec<f64> = reps.iter().map(|r| r.epsilon).collect();
        let gaps: Vec<f64> = reps.iter().map(|r| r.gap).collect();
        let (slope, _) = loglog_slope(&eps, &gaps);
        reps.iter_mut().for_each(|r| r.slope_fit = Some(slope));
    }
    Ok(reps)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowPoint {
    pub tau: f64,
    /// `E_{k-1}((N ± ∂ₓΘ)/2)` at this time.
    pub kdv_value: f64,
    /// Its change since the first snapshot.
    pub variation: f64,
    pub gap: f64,
}

/// The KdV functional of the Riemann component along a rescaled GP trajectory.
pub fn bridge_along_flow(trajectory: &[SlowState], k: usize, sign: Sign) -> Result<Vec<FlowPoint>> {
    check_k(k)?;
    let mut out = Vec::with_capacity(trajectory.len());
    let mut first = None;
    for s in trajectory {
        let value = kdv_invariants(&riemann_component(s, sign))?[k - 1];
        let v0 = *first.get_or_insert(value);
        out.push(FlowPoint {
            tau: s.tau,
            kdv_value: value,
            variation: (value - v0).abs(),
            gap: bridge_gap(s, k, sign)?.gap,
        });
    }
    Ok(out)
}
