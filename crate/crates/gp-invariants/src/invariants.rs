use std::f64::consts::SQRT_2;

use gp_solver::{madelung_with, GpState, RHO_MIN};
use spectral_core::{real_dot, Complex64 as C, ComplexField, Error, Result};

use crate::density::explicit_all;

/// Energy bound under which the phase lift and `p_k` are defined.
pub const SMALL_ENERGY: f64 = 2.0 * SQRT_2 / 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantVector {
    /// `E_1 .. E_4`
    pub e: [f64; 4],
    /// `P_2 .. P_4`
    pub p_mom: [f64; 3],
    /// Plain momentum `P_1 = 1/2 int <i psi', psi>` (box value).
    pub momentum: f64,
    /// `p_1 .. p_4`, present only when `valid_p`.
    pub p: Option<[f64; 4]>,
    /// `1/2 int (|psi|^2 - 1)` over the box.
    pub mass: f64,
    pub valid_p: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvariantId {
    E(usize),
    P(usize),
    RenormP(usize),
    Mass,
}

impl InvariantId {
    /// `E1..E4`, `P2..P4`, `p1..p4`.
    pub fn conserved() -> Vec<InvariantId> {
        let mut v: Vec<_> = (1..=4).map(InvariantId::E).collect();
        v.extend((2..=4).map(InvariantId::P));
        v.extend((1..=4).map(InvariantId::RenormP));
        v
    }

    pub fn name(&self) -> String {
        match self {
            InvariantId::E(k) => format!("E{k}"),
            InvariantId::P(k) => format!("P{k}"),
            InvariantId::RenormP(k) => format!("p{k}"),
            InvariantId::Mass => "mass".into(),
        }
    }
}

impl InvariantVector {
    pub fn get(&self, id: InvariantId) -> Option<f64> {
        match id {
            InvariantId::E(k) if (1..=4).contains(&k) => Some(self.e[k - 1]),
            InvariantId::P(1) => Some(self.momentum),
            InvariantId::P(k) if (2..=4).contains(&k) => Some(self.p_mom[k - 2]),
            InvariantId::RenormP(k) if (1..=4).contains(&k) => self.p.map(|p| p[k - 1]),
            InvariantId::Mass => Some(self.mass),
            _ => None,
        }
    }
}

/// `<i a, b>`
fn im_dot(a: C, b: C) -> f64 {
    real_dot(C::i() * a, b)
}

pub fn invariants(psi: &ComplexField) -> Result<InvariantVector> {
    let g = psi.grid();
    let d = g.derivatives(psi.data(), 4)?;
    let eta = psi.eta();
    let de = g.derivatives_real(&eta, 3)?;
    let int = |f: &dyn Fn(usize) -> f64| g.dx() * (0..g.n()).map(f).sum::<f64>();
    let a = |j: usize, i: usize| d[j][i].norm_sqr();
    let m = |j: usize, k: usize, i: usize| im_dot(d[j][i], d[k][i]);

    let e1 = int(&|i| 0.5 * a(1, i) + 0.25 * eta[i].powi(2));
    let e2 = int(&|i| {
        let h = eta[i];
        0.5 * a(2, i) - 1.5 * h * a(1, i) + 0.25 * de[1][i].powi(2) - 0.25 * h.powi(3)
    });
    let e3 = int(&|i| {
        let (h, a1) = (eta[i], a(1, i));
        0.5 * a(3, i) + 0.25 * de[2][i].powi(2) + 1.25 * a1 * a1 + 2.5 * de[2][i] * a1
            - 2.5 * h * a(2, i)
            - 1.25 * h * de[1][i].powi(2)
            + 3.75 * h * h * a1
            + 5.0 / 16.0 * h.powi(4)
    });
    let e4 = int(&|i| {
        let (h, a1, h1, h2) = (eta[i], a(1, i), de[1][i], de[2][i]);
        let d13 = real_dot(d[1][i], d[3][i]);
        0.5 * a(4, i) + 0.25 * de[3][i].powi(2) - 1.75 * h * h2 * h2 - 3.5 * h * a(3, i)
            + 35.0 / 8.0 * h * h * h1 * h1
            + 8.75 * h * h * a(2, i)
            - 8.75 * h1 * h1 * a1
            - 3.5 * a1 * a(2, i)
            - 7.0 * h2 * d13
            - 7.0 * a1 * d13
            - 17.5 * h * h2 * a1
            - 8.75 * h.powi(3) * a1
            - 8.75 * h * a1 * a1
            - 7.0 / 16.0 * h.powi(5)
    });
    let momentum = int(&|i| 0.5 * m(1, 0, i));
    let p2 = int(&|i| 0.5 * m(2, 1, i) - 0.75 * eta[i] * m(1, 0, i));
    let p3 = int(&|i| {
        let h = eta[i];
        0.5 * m(3, 2, i) - 2.5 * h * m(2, 1, i) + 1.25 * (h * h + h) * m(1, 0, i)
    });
    let p4 = int(&|i| {
        let h = eta[i];
        0.5 * m(4, 3, i) - 3.5 * h * m(3, 2, i) + 3.5 * de[2][i] * m(2, 1, i) + 1.75 * a(1, i) * m(2, 1, i)
            + 8.75 * h * h * m(2, 1, i)
            - 35.0 / 16.0 * (h.powi(3) + h * h + h) * m(1, 0, i)
    });
    let mass = -0.5 * g.integrate(&eta);

    let valid_p = e1 < SMALL_ENERGY && psi.min_abs() >= RHO_MIN;
    let p = if valid_p {
        let lift = madelung_with(psi, RHO_MIN)?;
        let phx = lift.phase_derivative.data();
        let p1 = int(&|i| 0.5 * eta[i] * phx[i]);
        Some([p1, p2 - 1.5 * p1, p3 + 2.5 * p1, p4 - 35.0 / 8.0 * p1])
    } else {
        None
    };
    Ok(InvariantVector { e: [e1, e2, e3, e4], p_mom: [p2, p3, p4], momentum, p, mass, valid_p })
}

/// Discrepancies between the closed-form invariants and the density combinations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenormalizationReport {
    pub k: usize,
    pub energy: f64,
    pub momentum: f64,
}

impl RenormalizationReport {
    pub fn worst(&self) -> f64 {
        self.energy.max(self.momentum)
    }
}

const EDGE_ETA: f64 = 1e-12;
const EDGE_SLOPE: f64 = 1e-10;

/// Compares `E_k` (and `P_k`, with `P_1` for `k = 1`) against the combinations of
/// `int f_n` with the far-field constants. Refuses fields that do not settle to
/// modulus one at both box edges.
pub fn renormalization_check(psi: &ComplexField, k: usize) -> Result<RenormalizationReport> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidArgument(format!("renormalization order must be 1..=4, got {k}")));
    }
    let g = psi.grid();
    let n = g.n();
    let d1 = g.derivative(psi.data(), 1)?;
    for i in [0, n - 1] {
        let eta = (1.0 - psi.data()[i].norm_sqr()).abs();
        let slope = d1[i].norm();
        if eta > EDGE_ETA || slope > EDGE_SLOPE {
            return Err(Error::NoDecay { edge: eta.max(slope) });
        }
    }
    let f = explicit_all(psi)?;
    let int = |coefs: &[(usize, f64)], constant: f64| -> C {
        let s: C = (0..n)
            .map(|i| coefs.iter().map(|&(m, c)| c * f[m - 1][i]).sum::<C>() + constant)
            .sum();
        s * g.dx()
    };
    let inv = invariants(psi)?;
    let i = C::i();
    let (e_val, e_comb, p_val, p_comb) = match k {
        1 => (inv.e[0], int(&[(3, 1.0), (1, 1.0)], 0.25), inv.momentum, -i * int(&[(2, 1.0)], 0.0)),
        2 => (
            inv.e[1],
            -int(&[(5, 1.0), (3, 3.0), (1, 1.5)], 0.25),
            inv.p_mom[0],
            i * int(&[(4, 1.0), (2, 1.5)], 0.0),
        ),
        3 => (
            inv.e[2],
            int(&[(7, 1.0), (5, 5.0), (3, 7.5), (1, 2.5)], 5.0 / 16.0),
            inv.p_mom[1],
            -i * int(&[(6, 1.0), (4, 5.0), (2, 5.0)], 0.0),
        ),
        _ => (
            inv.e[3],
            -int(&[(9, 1.0), (7, 7.0), (5, 17.5), (3, 17.5), (1, 35.0 / 8.0)], 7.0 / 16.0),
            inv.p_mom[2],
            i * int(&[(8, 1.0), (6, 7.0), (4, 17.5), (2, 105.0 / 8.0)], 0.0),
        ),
    };
    Ok(RenormalizationReport {
        k,
        energy: (e_comb - e_val).norm(),
        momentum: (p_comb - p_val).norm(),
    })
}

/// `|I(t) - I(0)| / max(|I(0)|, 1e-12)` along a trajectory.
pub fn drift(trajectory: &[GpState], which: InvariantId) -> Result<Vec<f64>> {
    let values = trajectory
        .iter()
        .map(|s| {
            let inv = invariants(&s.psi)?;
            inv.get(which).ok_or_else(|| {
                Error::Refused(format!("{} is undefined on this trajectory", which.name()))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(relative_drift(&values))
}

pub fn relative_drift(values: &[f64]) -> Vec<f64> {
    let Some(&v0) = values.first() else {
        return Vec::new();
    };
    let scale = v0.abs().max(1e-12);
    values.iter().map(|v| (v - v0).abs() / scale).collect()
}
