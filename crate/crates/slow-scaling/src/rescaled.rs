//! Slow-variable energies `ℰ_k` and momenta `𝒫_k`, `k = 1..4`.
//!
//! Densities are written with `n0..n4` for `N` and its derivatives and `t1..t4` for
//! the derivatives of `Θ` (so `t1` is `∂ₓΘ`), with `m = 1 - ε²N/6`.

use std::f64::consts::SQRT_2;

use spectral_core::{Error, Result};

use crate::SlowState;

/// Which transcription of the long formulas to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Formulas {
    /// The original coefficient set; misses the scaling identities at k = 3, 4.
    Literal,
    /// With the coefficient repairs that make the scaling identities hold.
    #[default]
    Corrected,
}

/// Pointwise jet of the slow pair.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub n: [f64; 5],
    pub t: [f64; 4],
}

fn energy_1(j: &Jet, e2: f64, m: f64) -> f64 {
    let [n0, n1, ..] = j.n;
    let t1 = j.t[0];
    0.125 * (t1 * t1 + n0 * n0) + e2 / 16.0 * (n1 * n1 / m - n0 * t1 * t1 / 3.0)
}

fn energy_2(j: &Jet, e2: f64, m: f64) -> f64 {
    let [n0, n1, n2, ..] = j.n;
    let [t1, t2, ..] = j.t;
    let a = t2 - e2 / (6.0 * m) * n1 * t1;
    let b = n2 + m / 6.0 * t1 * t1 + e2 / (12.0 * m) * n1 * n1;
    let r2 = n0 * n1 * n1 / m;
    0.125 * (n1 * n1 + m * a * a - n0.powi(3) / 6.0 - m / 2.0 * n0 * t1 * t1) + e2 / 16.0 * b * b / m
        - e2 / 32.0 * r2
}

fn energy_3(j: &Jet, e2: f64, m: f64, f: Formulas) -> f64 {
    let [n0, n1, n2, n3, _] = j.n;
    let [t1, t2, t3, _] = j.t;
    let dup = if f == Formulas::Literal { 5.0 / 12.0 } else { 0.0 };
    let r3 = 5.0 / 3.0 * n0 * n0 * t2 * t2 - 1.25 * n1 * n1 * t1 * t1 - 5.0 * n0 * n2 * t1 * t1
        - 5.0 / 12.0 * n0.powi(3) * t1 * t1
        - 5.0 / 18.0 * n0 * t1.powi(4)
        - dup * n0.powi(3) * t1 * t1
        - 5.0 / m * n0 * n2 * n2
        + 5.0 / (4.0 * m) * n0 * n0 * n1 * n1
        + e2 / 6.0
            * (5.0 / 24.0 * n0 * n0 * t1.powi(4) - 5.0 / (2.0 * m) * n0 * n1 * n1 * t1 * t1
                - 25.0 / (24.0 * m * m) * n1.powi(4)
                - 5.0 / (m * m) * n0 * n1 * n1 * n2
                - 5.0 * e2 / (24.0 * m.powi(3)) * n0 * n1.powi(4));
    let a = t3 - e2 / 72.0 * t1.powi(3) - e2 * n1 * t2 / (4.0 * m) - e2 * n2 * t1 / (4.0 * m)
        - e2 * e2 * n1 * n1 * t1 / (48.0 * m * m);
    let b = n3 - e2 / 24.0 * n1 * t1 * t1 + m / 2.0 * t1 * t2 + e2 / (4.0 * m) * n1 * n2
        + e2 * e2 / (48.0 * m * m) * n1.powi(3);
    0.125
        * (m * a * a + n2 * n2 - 5.0 / 6.0 * (2.0 * n1 * t1 * t2 + n0 * t2 * t2 + n0 * n1 * n1)
            + 5.0 / 144.0 * (t1.powi(4) + 6.0 * n0 * n0 * t1 * t1 + n0.powi(4)))
        + e2 / 16.0 * b * b / m
        + e2 / 96.0 * r3
}

fn energy_4(j: &Jet, e2: f64, m: f64, f: Formulas) -> f64 {
    let [n0, n1, n2, n3, n4] = j.n;
    let [t1, t2, t3, t4] = j.t;
    let m2 = m * m;
    let m3 = m2 * m;
    let a = t4 - e2 / (2.0 * m) * n2 * t2 - e2 / (3.0 * m) * n1 * t3 - e2 / (3.0 * m) * n3 * t1
        - e2 / 12.0 * t1 * t1 * t2
        - e2 * e2 / (24.0 * m2) * n1 * n1 * t2
        - e2 * e2 / (12.0 * m2) * n1 * n2 * t1
        + e2 * e2 / (216.0 * m) * n1 * t1.powi(3)
        - e2.powi(3) / (144.0 * m3) * n1.powi(3) * t1;
    let b = n4 + m / 2.0 * t2 * t2 + 2.0 / 3.0 * m * t1 * t3 + e2 / (3.0 * m) * n1 * n3
        + e2 / (4.0 * m) * n2 * n2
        - e2 / 12.0 * n2 * t1 * t1
        - e2 / 6.0 * n1 * t1 * t2
        - e2 / 432.0 * m * t1.powi(4)
        - e2 * e2 / (144.0 * m) * n1 * n1 * t1 * t1
        + e2 * e2 / (8.0 * m2) * n1 * n1 * n2
        + 5.0 * e2.powi(3) / (576.0 * m3) * n1.powi(4);
    let x = if f == Formulas::Literal { t1 } else { t2 };
    let mut r4 = 35.0 / 432.0 * m * n0 * n0 * t1.powi(4) + 7.0 / 864.0 * m * t1.powi(6)
        - 35.0 / 18.0 * m * n0 * t1 * t1 * x * x
        - 35.0 / 9.0 * n0 * n0 * n1 * t1 * t2
        + 35.0 / 72.0 * n2 * t1.powi(4)
        - 175.0 / 72.0 * n0 * n1 * n1 * t1 * t1
        - 35.0 / 24.0 * n1 * n1 * t2 * t2
        + 91.0 / 24.0 * n2 * n2 * t1 * t1
        + 35.0 / 6.0 * n1 * n2 * t1 * t2
        + 21.0 / 12.0 * n0 * n2 * t2 * t2
        + 2.0 / 3.0 * n0 * n2 * t1 * t3
        + 3.5 * n2.powi(3)
        - 35.0 / (144.0 * m) * n0.powi(3) * n1 * n1
        - 35.0 / (72.0 * m) * n1.powi(4)
        + 35.0 / (24.0 * m) * n0 * n0 * n2 * n2
        + e2 / 4.0
            * (7.0 / (2.0 * m2) * n0 * n2.powi(3) - 7.0 * m / 46656.0 * n0 * t1.powi(6)
                - 35.0 / 54.0 * n0 * n2 * t1.powi(4)
                - 35.0 / 432.0 * n1 * n1 * t1.powi(4)
                + 35.0 / (72.0 * m) * n0 * n0 * n1 * n1 * t1 * t1
                + 7.0 / (3.0 * m) * n1 * n1 * n2 * n2
                - 35.0 / (12.0 * m) * n0 * n1 * n1 * t2 * t2
                - 35.0 / (18.0 * m) * n1 * n1 * n2 * t1 * t1
                - 35.0 / (12.0 * m) * n0 * n2 * n2 * t1 * t1
                - 35.0 / (3.0 * m) * n0 * n1 * n2 * t1 * t2
                - 35.0 / (54.0 * m2) * n0 * n1.powi(4))
        + e2 * e2 / 144.0
            * (35.0 / (8.0 * m2) * n1.powi(4) * t1 * t1 - 35.0 / (96.0 * m) * n0 * n1 * n1 * t1.powi(4)
                + 35.0 / m2 * n0 * n1 * n1 * n2 * t1 * t1
                - 175.0 / (72.0 * m3) * n0 * n0 * n1.powi(4)
                + 147.0 / (2.0 * m3) * n0 * n1 * n1 * n2 * n2)
        + e2.powi(3) / 6912.0
            * (245.0 / m3 * n0 * n1.powi(4) * t1 * t1 - 497.0 / (5.0 * m2 * m2) * n1.powi(6))
        - 7.0 * e2.powi(4) / (2560.0 * m2 * m3) * n0 * n1.powi(6);
    if f == Formulas::Corrected {
        r4 += 35.0 / 432.0 * n0.powi(4) * t1 * t1 - 7.0 / (2.0 * m) * n0 * n3 * n3
            + 35.0 / 864.0 * n0 * n0 * t1.powi(4)
            - 35.0 / 144.0 * n0 * n1 * n1 * t1 * t1
            + 19.0 / 3.0 * n0 * n2 * t1 * t3
            + e2 / 4.0
                * (175.0 / 432.0 * n0 * n1.powi(4) / m2 + 7.0 / 3.0 * n0 * n2.powi(3) / m
                    - 497.0 / 46656.0 * n0 * t1.powi(6) * m
                    - 7.0 / 12.0 * n1 * n1 * n2 * n2 * m2
                    + 35.0 / 9.0 * n1 * n1 * n2 * t1 * t1 / m)
            + e2 * e2 / 144.0
                * (-35.0 / 32.0 * n0 * n1 * n1 * t1.powi(4) / m + 35.0 / 3.0 * n1.powi(4) * t1 * t1 / m2)
            + e2.powi(3) / 6912.0 * 168.0 * n0 * n0 * n1 * n1 * n2 * n2;
    }
    0.125
        * (m * a * a + n3 * n3 - 7.0 / 6.0 * (n0 * n2 * n2 + m * n0 * t3 * t3 + 2.0 * m * n2 * t1 * t3)
            + 35.0 / 72.0
                * (n0 * n0 * n1 * n1 + m * t1 * t1 * t2 * t2 + 4.0 * n0 * n1 * t1 * t2 + m * n0 * n0 * t2 * t2
                    + n1 * n1 * t1 * t1)
            - 7.0 / 864.0 * (n0.powi(5) + 5.0 * n0 * t1.powi(4) + 10.0 * n0.powi(3) * t1 * t1))
        + e2 / 16.0 * b * b / m
        + e2 / 48.0 * r4
}

fn momentum(j: &Jet, k: usize, e2: f64, m: f64, f: Formulas) -> f64 {
    let [n0, n1, n2, n3, _] = j.n;
    let [t1, t2, t3, t4] = j.t;
    let c = 1.0 / (4.0 * SQRT_2);
    match k {
        1 => c * n0 * t1,
        2 => {
            c * (n1 * t2 - m / 12.0 * t1.powi(3) - 0.25 * n0 * n0 * t1)
                - e2 / (32.0 * SQRT_2) * n1 * n1 * t1 / m
        }
        3 => {
            let r3 = 5.0 / 6.0 * n0 * t1 * t2 * t2 + 5.0 / 3.0 * n1 * t1 * t1 * t2 - m / 72.0 * t1.powi(5)
                + 5.0 / (4.0 * m) * n0 * n1 * n1 * t1
                - 5.0 / m * n1 * n2 * t2
                - 5.0 / (2.0 * m) * n2 * n2 * t1
                - 5.0 * e2 / (72.0 * m) * n1 * n1 * t1.powi(3)
                - 5.0 * e2 / (18.0 * m * m) * n1.powi(3) * t2
                + 25.0 * e2 * e2 / (864.0 * m.powi(3)) * n1.powi(4) * t1;
            c * (n2 * t3 - 5.0 / 12.0 * (t1 * t2 * t2 + 2.0 * n0 * n1 * t2 + n1 * n1 * t1)
                + 5.0 / 72.0 * (m * n0 * t1.powi(3) + n0.powi(3) * t1))
                + e2 / (48.0 * SQRT_2) * r3
        }
        _ => {
            let m2 = m * m;
            let m3 = m2 * m;
            let y = if f == Formulas::Literal { t1 } else { t2 };
            let r4 = 7.0
                * (5.0 / (12.0 * m) * n0 * n2 * n2 * t1 + 5.0 / (6.0 * m) * n0 * n1 * n2 * t2
                    - 5.0 / (48.0 * m) * n0 * n0 * n1 * n1 * t1
                    + 0.25 * n2 * t1 * t2 * t2
                    - 5.0 / 12.0 * n0 * n1 * t1 * t1 * t2
                    + 0.5 * n2 * t1 * t1 * t3
                    - 25.0 / 144.0 * n1 * n1 * t1.powi(3)
                    + 1.0 / 216.0 * n0 * t1.powi(5)
                    - 1.0 / 12.0 * n1 * t2.powi(3)
                    - 5.0 * m / 72.0 * t1.powi(3) * t2 * t2
                    - 5.0 / (36.0 * m) * n1.powi(3) * t2
                    + 5.0 / (72.0 * m) * n1 * n1 * t1.powi(3)
                    - 1.0 / m * n1 * n3 * t3
                    - 1.0 / (2.0 * m) * n3 * n3 * t1
                    + 5.0 / (18.0 * m2) * n1.powi(3) * t2)
                + e2 / 4.0
                    * (245.0 / (432.0 * m2) * n1.powi(4) * t1 - 21.0 / 1296.0 * n0 * n0 * t1.powi(5)
                        - m / 1296.0 * t1.powi(7)
                        - 35.0 / (36.0 * m) * n2 * n2 * t1.powi(3)
                        - 35.0 / (6.0 * m) * n1 * n2 * t1 * t1 * t2
                        - 35.0 / (12.0 * m) * n1 * n1 * t1 * y * y
                        + 7.0 / (2.0 * m2) * n1 * n2 * n2 * t2
                        - 7.0 / m2 * n1 * n1 * n2 * t3
                        + 7.0 / (2.0 * m2) * n2.powi(3) * t1
                        - 175.0 / (216.0 * m3) * n1.powi(4) * t1
                        - 7.0 / 108.0 * n2 * t1.powi(5))
                + e2 * e2 / 48.0
                    * (35.0 / m3 * n1.powi(3) * n2 * t2 - 7.0 / (72.0 * m) * n1 * n1 * t1.powi(5)
                        - 25.0 / (6.0 * m2) * n1.powi(3) * t1 * t1 * t2
                        - 5.0 / (18.0 * m2) * n1 * n1 * n2 * t1.powi(3)
                        + 49.0 / (2.0 * m3) * n1 * n1 * n2 * n2 * t1)
                + e2.powi(3) / 768.0
                    * (5.0 / (3.0 * m3) * n1.powi(4) * t1.powi(3) + 252.0 / (5.0 * m2 * m2) * n1.powi(5) * t2
                        - 49.0 * e2 / (10.0 * m2 * m3) * n1.powi(6) * t1);
            c * (n3 * t4 - 7.0 / 12.0 * (2.0 * n0 * n2 * t3 + n2 * n2 * t1 + m * t1 * t3 * t3)
                + 35.0 / 72.0 * (n0 * n0 * n1 * t2 + n0 * n1 * n1 * t1 + n1 * t1 * t1 * t2 + m * n0 * t1 * t2 * t2)
                - 7.0 / 1728.0 * (t1.powi(5) + 10.0 * m * n0 * n0 * t1.powi(3) + 5.0 * n0.powi(4) * t1))
                + e2 / (48.0 * SQRT_2) * r4
        }
    }
}

/// Pointwise energy density of order `k` at `ε² = e2`.
pub fn energy_density(j: &Jet, k: usize, e2: f64, f: Formulas) -> f64 {
    let m = 1.0 - e2 / 6.0 * j.n[0];
    match k {
        1 => energy_1(j, e2, m),
        2 => energy_2(j, e2, m),
        3 => energy_3(j, e2, m, f),
        _ => energy_4(j, e2, m, f),
    }
}

/// Pointwise momentum density of order `k` at `ε² = e2`.
pub fn momentum_density(j: &Jet, k: usize, e2: f64, f: Formulas) -> f64 {
    let m = 1.0 - e2 / 6.0 * j.n[0];
    momentum(j, k, e2, m, f)
}

/// Treatment of the ε-dependent terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Remainder {
    #[default]
    Full,
    /// Every explicit ε factor and `m` set to their ε = 0 values.
    Zeroed,
}

/// `(ℰ_k, 𝒫_k)` of a slow state.
pub fn rescaled_invariants(s: &SlowState, k: usize) -> Result<(f64, f64)> {
    rescaled_invariants_with(s, k, Formulas::Literal, Remainder::Full)
}

pub fn rescaled_invariants_with(
    s: &SlowState,
    k: usize,
    f: Formulas,
    rem: Remainder,
) -> Result<(f64, f64)> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidArgument(format!("invariant order must be 1..=4, got {k}")));
    }
    let e2 = match rem {
        Remainder::Full => s.epsilon * s.epsilon,
        Remainder::Zeroed => 0.0,
    };
    let jets = s.jets()?;
    let g = s.n.grid();
    let (mut e, mut p) = (0.0, 0.0);
    for j in &jets {
        e += energy_density(j, k, e2, f);
        p += momentum_density(j, k, e2, f);
    }
    Ok((e * g.dx(), p * g.dx()))
}

/// `(1/8)∫(N - ∂ₓΘ)² + (ε²/16)∫((∂ₓN)²/m - N(∂ₓΘ)²/3)`, the closed form of `ℰ₁ - √2 𝒫₁`.
pub fn energy_minus_momentum_1(s: &SlowState) -> Result<f64> {
    let e2 = s.epsilon * s.epsilon;
    let jets = s.jets()?;
    let sum: f64 = jets
        .iter()
        .map(|j| {
            let [n0, n1, ..] = j.n;
            let t1 = j.t[0];
            let m = 1.0 - e2 / 6.0 * n0;
            0.125 * (n0 - t1).powi(2) + e2 / 16.0 * (n1 * n1 / m - n0 * t1 * t1 / 3.0)
        })
        .sum();
    Ok(sum * s.n.grid().dx())
}
