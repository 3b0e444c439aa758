use spectral_core::{Complex64 as C, ComplexField, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    Explicit,
    Recursive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityId {
    pub n: usize,
    pub mode: DensityMode,
}

impl DensityId {
    pub fn new(n: usize, mode: DensityMode) -> Result<Self> {
        if !(1..=9).contains(&n) {
            return Err(Error::InvalidArgument(format!("density index must be 1..=9, got {n}")));
        }
        Ok(DensityId { n, mode })
    }
}

/// Pointwise density `f_n(psi)` as complex samples.
pub fn density(psi: &ComplexField, id: DensityId) -> Result<Vec<C>> {
    let id = DensityId::new(id.n, id.mode)?;
    match id.mode {
        DensityMode::Explicit => explicit(psi, id.n),
        DensityMode::Recursive => recursive(psi, id.n),
    }
}

/// All nine explicit densities, sharing one set of derivatives.
pub fn explicit_all(psi: &ComplexField) -> Result<Vec<Vec<C>>> {
    let jets = psi.grid().derivatives(psi.data(), 8)?;
    Ok((1..=9).map(|n| explicit_from_jets(&jets, n)).collect())
}

fn explicit(psi: &ComplexField, n: usize) -> Result<Vec<C>> {
    let order = n.saturating_sub(1) as u32;
    let jets = psi.grid().derivatives(psi.data(), order)?;
    Ok(explicit_from_jets(&jets, n))
}

fn explicit_from_jets(jets: &[Vec<C>], n: usize) -> Vec<C> {
    let len = jets[0].len();
    let mut p = [C::new(0.0, 0.0); 9];
    (0..len)
        .map(|i| {
            for (j, d) in jets.iter().enumerate() {
                p[j] = d[i];
            }
            point(&p, n)
        })
        .collect()
}

fn point(p: &[C; 9], n: usize) -> C {
    let q: [C; 9] = std::array::from_fn(|j| p[j].conj());
    let a = p[0].norm_sqr();
    let a1 = p[1] * q[1];
    let r = |v: f64| C::new(v, 0.0);
    match n {
        1 => r(-0.5 * a),
        2 => -0.5 * q[0] * p[1],
        3 => -0.5 * q[0] * p[2] + 0.25 * a * a,
        4 => -0.5 * q[0] * p[3] + a * q[0] * p[1] + 0.25 * a * p[0] * q[1],
        5 => {
            -0.5 * q[0] * p[4] + 1.5 * a * q[0] * p[2] + 0.25 * a * p[0] * q[2] + 1.5 * a * a1
                + 1.25 * q[0] * q[0] * p[1] * p[1]
                - 0.25 * a * a * a
        }
        6 => {
            -0.5 * q[0] * p[5] + 2.0 * a * q[0] * p[3] + 0.25 * a * p[0] * q[3] + 2.0 * a * p[1] * q[2]
                + 3.0 * a * q[1] * p[2]
                + 4.5 * q[0] * q[0] * p[1] * p[2]
                + 2.75 * a1 * q[0] * p[1]
                - 0.75 * a * a * p[0] * q[1]
                - 2.0 * a * a * q[0] * p[1]
        }
        7 => {
            -0.5 * q[0] * p[6] + 0.25 * a * p[0] * q[4] + 2.5 * a * q[0] * p[4] + 2.5 * a * p[1] * q[3]
                + 5.0 * a * q[1] * p[3]
                + 7.0 * q[0] * q[0] * p[1] * p[3]
                + 5.0 * a * p[2] * q[2]
                + 4.75 * p[1] * p[1] * q[0] * q[2]
                + 4.75 * q[0] * q[0] * p[2] * p[2]
                + 13.0 * a1 * q[0] * p[2]
                - a * a * p[0] * q[2]
                - 3.75 * a * a * q[0] * p[2]
                - 0.75 * a * p[0] * p[0] * q[1] * q[1]
                - 8.0 * a * a * a1
                - 6.25 * a * q[0] * q[0] * p[1] * p[1]
                + 5.0 / 16.0 * a.powi(4)
        }
        8 => {
            -0.5 * q[0] * p[7] + 0.25 * a * p[0] * q[5] + 3.0 * a * q[0] * p[5] + 3.0 * a * p[1] * q[4]
                + 7.5 * a * q[1] * p[4]
                + 10.0 * q[0] * q[0] * p[1] * p[4]
                + 7.5 * a * p[2] * q[3]
                + 7.25 * p[1] * p[1] * q[0] * q[3]
                + 10.0 * a * q[2] * p[3]
                + 17.0 * q[0] * q[0] * p[2] * p[3]
                + 25.0 * a1 * q[0] * p[3]
                + 27.5 * p[2] * q[2] * q[0] * p[1]
                + 17.75 * p[2] * p[2] * q[0] * q[1]
                - 1.25 * a * a * p[0] * q[3]
                - 6.0 * a * a * q[0] * p[3]
                - 2.5 * a * p[0] * p[0] * q[1] * q[2]
                - 13.25 * a * a * p[1] * q[2]
                - 18.75 * a * a * q[1] * p[2]
                - 27.0 * a * q[0] * q[0] * p[1] * p[2]
                - 10.25 * a * a1 * p[0] * q[1]
                - 32.75 * a * a1 * q[0] * p[1]
                - 7.5 * q[0].powu(3) * p[1].powu(3)
                + 29.0 / 16.0 * a.powi(3) * p[0] * q[1]
                + 4.0 * a.powi(3) * q[0] * p[1]
        }
        9 => {
            -0.5 * q[0] * p[8] + 0.25 * a * p[0] * q[6] + 3.5 * a * q[0] * p[6] + 3.5 * a * p[1] * q[5]
                + 10.5 * a * q[1] * p[5]
                + 13.5 * q[0] * q[0] * p[1] * p[5]
                + 10.5 * a * p[2] * q[4]
                + 10.25 * p[1] * p[1] * q[0] * q[4]
                + 17.5 * a * q[2] * p[4]
                + 27.5 * q[0] * q[0] * p[2] * p[4]
                + 42.5 * a1 * q[0] * p[4]
                + 17.5 * a * p[3] * q[3]
                + 49.5 * q[0] * p[1] * p[2] * q[3]
                + 17.25 * q[0] * q[0] * p[3] * p[3]
                + 62.5 * q[0] * p[1] * q[2] * p[3]
                + 77.5 * q[0] * q[1] * p[2] * p[3]
                + 45.25 * q[0] * p[2] * p[2] * q[2]
                - 1.5 * a * a * p[0] * q[4]
                - 8.75 * a * a * q[0] * p[4]
                - 3.75 * a * p[0] * p[0] * q[1] * q[3]
                - 19.75 * a * a * p[1] * q[3]
                - 36.0 * a * a * q[1] * p[3]
                - 49.0 * a * q[0] * q[0] * p[1] * p[3]
                - 2.5 * a * p[0] * p[0] * q[2] * q[2]
                - 37.25 * a * a * p[2] * q[2]
                - 41.25 * a * a1 * p[0] * q[2]
                - 66.0 * a * q[0] * p[1] * p[1] * q[2]
                - 33.25 * a * q[0] * q[0] * p[2] * p[2]
                - 29.0 * a * p[0] * q[1] * q[1] * p[2]
                - 174.5 * a * a1 * q[0] * p[2]
                - 55.25 * q[0].powu(3) * p[1] * p[1] * p[2]
                - 53.25 * a * a1 * a1
                - 50.5 * a1 * q[0] * q[0] * p[1] * p[1]
                + 47.0 / 16.0 * a.powi(3) * p[0] * q[2]
                + 8.75 * a.powi(3) * q[0] * p[2]
                + 71.0 / 16.0 * a * a * p[0] * p[0] * q[1] * q[1]
                + 29.25 * a.powi(3) * a1
                + 21.875 * a * a * q[0] * q[0] * p[1] * p[1]
                - 7.0 / 16.0 * a.powi(5)
        }
        _ => unreachable!("density index checked by caller"),
    }
}

// Polynomial degree bound of F_m in (psi, conj psi).
fn degrees(nmax: usize) -> Vec<usize> {
    let mut d = vec![0, 1];
    for m in 1..nmax {
        let mut best = d[m];
        for j in 1..m {
            best = best.max(1 + d[j] + d[m - j]);
        }
        d.push(best);
    }
    d
}

/// `conj(psi) F_n` with `F_1 = -psi/2`, `F_{m+1} = F_m' + conj(psi) sum_{j<m} F_j F_{m-j}`,
/// on a grid fine enough to hold every product exactly.
fn recursive(psi: &ComplexField, n: usize) -> Result<Vec<C>> {
    let g = psi.grid();
    let band = g.bandwidth(psi.data(), 1e-14).max(1);
    let deg = degrees(n);
    let need = 2 * (deg[n] + 1) * band + 2;
    let mut factor = 1;
    while factor * g.n() < need {
        factor *= 2;
    }
    let (fine, u) = g.upsample(psi.data(), factor)?;
    let ubar: Vec<C> = u.iter().map(|z| z.conj()).collect();
    let mut f: Vec<Vec<C>> = vec![Vec::new(), u.iter().map(|z| -0.5 * z).collect()];
    for m in 1..n {
        let mut next = fine.derivative(&f[m], 1)?;
        if m > 1 {
            let mut s = vec![C::new(0.0, 0.0); fine.n()];
            for j in 1..m {
                for (acc, (a, b)) in s.iter_mut().zip(f[j].iter().zip(&f[m - j])) {
                    *acc += a * b;
                }
            }
            for ((x, sv), ub) in next.iter_mut().zip(&s).zip(&ubar) {
                *x += ub * sv;
            }
        }
        f.push(fine.truncate(&next, deg[m + 1] * band));
    }
    Ok(f[n].iter().zip(&ubar).step_by(factor).map(|(a, b)| a * b).collect())
}
