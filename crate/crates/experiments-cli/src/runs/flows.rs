use anyhow::{bail, Result};
use gp_solver::long_wave_data;
use rayon::prelude::*;
use slow_scaling::{dalembert_solve, kdv_consistency_residual, lab_fields, to_slow, SlowState};
use spectral_core::{Grid, RealField};

use super::max_of;
use crate::config::ExperimentConfig;
use crate::report::{ExperimentReport, Row, SlopeFit, Table, Verdict};
use crate::sim::{
    center_of_mass, gp_slow_trajectory, gp_states, kdv_trajectory, left_moving_psi, soliton_psi, uniform,
};

fn l2_gap(a: &RealField, b: &RealField) -> Result<f64> {
    Ok(a.axpby(1.0, b, -1.0)?.l2_norm())
}

/// `(4/ε²)(1 - √(1 - ε²/2)) - 1`
fn speed_law_excess(eps: f64) -> f64 {
    4.0 / (eps * eps) * (1.0 - (1.0 - eps * eps / 2.0).sqrt()) - 1.0
}

/// The entry of `eps` nearest to `target`.
fn nearest(eps: &[f64], target: f64) -> usize {
    (0..eps.len())
        .min_by(|&a, &b| (eps[a] - target).abs().total_cmp(&(eps[b] - target).abs()))
        .expect("non-empty")
}

/// `‖N⁰‖_{H³}, ε‖∂⁴N⁰‖, ‖∂ₓΘ⁰‖_{H³}, ‖N⁰ - ∂ₓΘ⁰‖_{H³}`
fn data_norms(s: &SlowState) -> Result<[f64; 4]> {
    Ok([
        s.n.sobolev_norm(3)?,
        s.epsilon * s.n.derivative(4)?.l2_norm(),
        s.theta_x.sobolev_norm(3)?,
        s.n.axpby(1.0, &s.theta_x, -1.0)?.sobolev_norm(3)?,
    ])
}

struct CompareCell {
    curve: Vec<Row>,
    norms: [f64; 4],
    speed_excess: f64,
    left_error: f64,
}

pub fn run_kdv_compare(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(cfg);
    let taus = uniform(cfg.tau_max, 10);
    let cells: Vec<CompareCell> = cfg
        .epsilons
        .par_iter()
        .map(|&eps| -> Result<CompareCell> {
            let psi = soliton_psi(eps, cfg.grid_length, cfg.grid_n)?;
            let s0 = to_slow(&psi, eps, 0.0)?;
            let norms = data_norms(&s0)?;
            let bound = norms[0] + norms[1] + norms[2];
            if bound > cfg.k0 {
                bail!(
                    "initial data at eps = {eps} violates the size assumption: |N0|_H3 = {:.6e}, eps |d4 N0| = {:.6e}, |dTheta0|_H3 = {:.6e} (sum {bound:.6e} > k0 = {})",
                    norms[0],
                    norms[1],
                    norms[2],
                    cfg.k0
                );
            }
            let gp = gp_slow_trajectory(psi, eps, &taus, cfg.dt)?;
            let kn = kdv_trajectory(&s0.n, &taus, cfg.dtau)?;
            let km = kdv_trajectory(&s0.theta_x, &taus, cfg.dtau)?;
            let mut curve = Vec::with_capacity(taus.len());
            for ((s, a), b) in gp.iter().zip(&kn).zip(&km) {
                curve.push(Row::new(eps, s.tau, l2_gap(&s.n, a)?).with([l2_gap(&s.theta_x, b)?]));
            }
            let last = gp.last().expect("non-empty");
            let speed_excess = (center_of_mass(&last.n) - center_of_mass(&gp[0].n)) / cfg.tau_max - 1.0;

            let lpsi = left_moving_psi(eps, cfg.grid_length, cfg.grid_n)?;
            let lgp = gp_slow_trajectory(lpsi, eps, &[0.0, cfg.tau_max], cfg.dt)?;
            let lk = kdv_trajectory(&lgp[0].n, &[cfg.tau_max], cfg.dtau)?;
            let left_error = l2_gap(&lgp[1].n, &lk[0])?;
            Ok(CompareCell { curve, norms, speed_excess, left_error })
        })
        .collect::<Result<_>>()?;

    let eps = &cfg.epsilons;
    let mut curves = Table::new("kdv_compare", &["theta_error"]);
    let mut norms = Table::new("initial_norms", &["eps_d4_n", "theta_h3", "n_minus_theta_h3"]);
    let mut speed = Table::new("speed_excess", &["eps2_over_8", "speed_law"]);
    let mut left = Table::new("left_moving", &["error_over_eps"]);
    for (c, &e) in cells.iter().zip(eps) {
        c.curve.iter().for_each(|r| curves.push(r.clone()));
        norms.push(Row::new(e, 0.0, c.norms[0]).with(c.norms[1..].iter().copied()));
        speed.push(Row::new(e, cfg.tau_max, c.speed_excess).with([e * e / 8.0, speed_law_excess(e)]));
        left.push(Row::new(e, cfg.tau_max, c.left_error).with([c.left_error / e]));
    }

    let final_err: Vec<f64> = cells.iter().map(|c| c.curve.last().expect("non-empty").value).collect();
    match SlopeFit::fit(format!("N error at tau {} vs eps", cfg.tau_max), eps, &final_err) {
        Some(fit) => {
            rep.verdicts.push(Verdict::within("error slope in eps", fit.slope, 2.0, 0.3));
            rep.slopes.push(fit);
        }
        None => bail!("kdv-compare needs at least four epsilon values for the slope fit"),
    }

    let i = nearest(eps, 0.3);
    let ratio = cells[i].speed_excess / (eps[i] * eps[i] / 8.0);
    rep.verdicts.push(Verdict::within(format!("speed excess over eps^2/8 at eps {}", eps[i]), ratio, 1.0, 0.1));
    rep.info("speed_excess_measured", cells[i].speed_excess);
    rep.info("speed_excess_law", speed_law_excess(eps[i]));

    // growth in τ at the same ε
    let (t, e): (Vec<f64>, Vec<f64>) = cells[i].curve.iter().filter(|r| r.tau > 0.0).map(|r| (r.tau, r.value)).unzip();
    if let Some(fit) = SlopeFit::fit(format!("N error vs tau at eps {}", eps[i]), &t, &e) {
        rep.slopes.push(fit);
    }

    let k_left = max_of(cells.iter().zip(eps).map(|(c, e)| c.left_error / e));
    rep.info("left_moving_fitted_k", k_left);
    rep.info("max_data_norm_sum", max_of(cells.iter().map(|c| c.norms[0] + c.norms[1] + c.norms[2])));
    rep.tables.extend([curves, norms, speed, left]);
    Ok(rep)
}

pub fn run_v_growth(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(cfg);
    let taus = uniform(cfg.tau_max, 8);
    let run = |left: bool| -> Result<Vec<Vec<Row>>> {
        cfg.epsilons
            .par_iter()
            .map(|&eps| {
                let psi = if left {
                    left_moving_psi(eps, cfg.grid_length, cfg.grid_n)?
                } else {
                    soliton_psi(eps, cfg.grid_length, cfg.grid_n)?
                };
                let traj = gp_slow_trajectory(psi, eps, &taus, cfg.dt)?;
                let v0 = traj[0].v().l2_norm();
                Ok(traj
                    .iter()
                    .map(|s| {
                        let v = s.v().l2_norm();
                        let excess = v - v0;
                        Row::new(eps, s.tau, excess).with([v, s.u().l2_norm(), excess / (eps * eps * (1.0 + s.tau))])
                    })
                    .collect())
            })
            .collect()
    };
    // C_ε: smallest constant covering every τ at this ε
    let constants = |cells: &[Vec<Row>]| -> Vec<f64> {
        cells.iter().map(|rows| max_of(rows.iter().map(|r| r.extra[2].max(0.0)))).collect()
    };

    let left = run(true)?;
    let soliton = run(false)?;
    let cl = constants(&left);
    let c = max_of(cl.iter().copied());
    let (first, last) = (cl[0], cl[cl.len() - 1]);
    rep.info("fitted_c", c);
    for (e, k) in cfg.epsilons.iter().zip(&cl) {
        rep.info(format!("c_eps{e}"), *k);
    }
    rep.verdicts.push(Verdict::at_most(
        "fitted C at smallest eps over C at largest eps",
        if first > 0.0 { last / first } else { f64::INFINITY },
        1.25,
    ));
    let worst_soliton = max_of(soliton.iter().flatten().map(|r| r.extra[2] / c));
    rep.verdicts.push(Verdict::at_most("soliton excess over C eps^2 (1 + tau)", worst_soliton, 1.0));

    let sup = |cells: &[Vec<Row>], i: usize| max_of(cells[i].iter().map(|r| r.value));
    if cfg.epsilons.len() >= 2 {
        let n = cfg.epsilons.len() - 1;
        rep.info("excess_ratio_largest_to_smallest_eps", sup(&left, 0) / sup(&left, n));
        rep.info("eps_ratio_squared", (cfg.epsilons[0] / cfg.epsilons[n]).powi(2));
    }

    for (name, cells) in [("v_growth_left_moving", left), ("v_growth_soliton", soliton)] {
        let mut t = Table::new(name, &["v_norm", "u_norm", "excess_over_eps2_1_tau"]);
        cells.into_iter().flatten().for_each(|r| t.push(r));
        rep.tables.push(t);
    }
    Ok(rep)
}

pub fn run_consistency(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(cfg);
    let centers: Vec<f64> = uniform(cfg.tau_max, 20).into_iter().skip(1).collect();
    if cfg.dtau >= centers[0] {
        bail!("dtau {} must be smaller than the snapshot spacing {}", cfg.dtau, centers[0]);
    }
    let mut taus = Vec::with_capacity(3 * centers.len());
    for &c in &centers {
        taus.extend([c - cfg.dtau, c, c + cfg.dtau]);
    }
    let series: Vec<Vec<Row>> = cfg
        .epsilons
        .par_iter()
        .map(|&eps| -> Result<Vec<Row>> {
            let psi = soliton_psi(eps, cfg.grid_length, cfg.grid_n)?;
            let traj = gp_slow_trajectory(psi, eps, &taus, cfg.dt)?;
            traj.chunks(3)
                .map(|w| {
                    let p = kdv_consistency_residual(w)?[0];
                    Ok(Row::new(eps, p.tau, p.forcing).with([p.finite_difference, p.route_gap]))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut worst_ratio: f64 = 0.0;
    let mut mean = Vec::new();
    for (rows, e) in series.iter().zip(&cfg.epsilons) {
        let hi = max_of(rows.iter().map(|r| r.value));
        let lo = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
        let ratio = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        rep.info(format!("max_over_min_eps{e}"), ratio);
        worst_ratio = worst_ratio.max(ratio);
        mean.push(rows.iter().map(|r| r.value).sum::<f64>() / rows.len() as f64);
    }
    rep.verdicts.push(Verdict::at_most("residual max/min over tau", worst_ratio, 3.0));
    match SlopeFit::fit("mean residual vs eps", &cfg.epsilons, &mean) {
        Some(fit) => {
            rep.verdicts.push(Verdict::at_least("residual slope in eps", fit.slope, 1.0));
            rep.slopes.push(fit);
        }
        None => bail!("consistency needs at least four epsilon values for the slope fit"),
    }
    let gap = max_of(series.iter().flatten().map(|r| r.extra[1]));
    rep.info("max_route_gap", gap);

    let mut t = Table::new("consistency", &["finite_difference", "route_gap"]);
    series.into_iter().flatten().for_each(|r| t.push(r));
    rep.tables.push(t);
    Ok(rep)
}

/// Left-moving Gaussian pulse of unit height and width 8 in slow units.
fn pulse(x: f64) -> f64 {
    (-(x / 8.0).powi(2)).exp()
}

pub fn run_wave_regime(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(cfg);
    // the τ column holds ε³t
    let levels = uniform(cfg.tau_max, 4);
    let g = Grid::periodic(cfg.grid_length, cfg.grid_n)?;
    let n0 = RealField::from_fn(g.clone(), pulse)?;
    let w0 = n0.axpby(2.0, &n0, 0.0)?;
    let cells: Vec<Vec<Row>> = cfg
        .epsilons
        .par_iter()
        .map(|&eps| -> Result<Vec<Row>> {
            let psi = long_wave_data(&n0, &n0, eps)?;
            let times: Vec<f64> = levels.iter().map(|q| q / eps.powi(3)).collect();
            let states = gp_states(psi, &times, cfg.dt)?;
            states
                .iter()
                .zip(&levels)
                .map(|(st, &q)| {
                    let (n, w) = lab_fields(&st.psi, eps)?;
                    let n = RealField::new(g.clone(), n.into_data())?;
                    let w = RealField::new(g.clone(), w.into_data())?;
                    let s = eps * st.t;
                    let free = dalembert_solve(&n0, &w0, s)?;
                    let en = l2_gap(&n, &free.n())?;
                    let ew = l2_gap(&w, &free.w())?;
                    let right = n.axpby(0.5, &w, -0.25)?.l2_norm();
                    Ok(Row::new(eps, q, en + ew).with([en, ew, right, s]))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut spread: f64 = 0.0;
    for (j, &q) in levels.iter().enumerate().skip(1) {
        let vals: Vec<f64> = cells.iter().map(|c| c[j].value).collect();
        let hi = max_of(vals.iter().copied());
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let sp = (hi - lo) / hi;
        rep.info(format!("spread_at_{q}"), sp);
        spread = spread.max(sp);
        if let Some(fit) = SlopeFit::fit(format!("error vs eps at eps^3 t = {q}"), &cfg.epsilons, &vals) {
            rep.slopes.push(fit);
        }
    }
    rep.verdicts.push(Verdict::at_most("collapse spread under eps^3 t", spread, 0.3));
    rep.info("initial_error", max_of(cells.iter().map(|c| c[0].value)));
    let k_right = max_of(cells.iter().flatten().filter(|r| r.tau > 0.0).map(|r| r.extra[2] / r.tau));
    rep.info("right_going_fitted_k", k_right);

    let mut t = Table::new("wave_regime", &["n_error", "w_error", "right_going", "s"]);
    cells.into_iter().flatten().for_each(|r| t.push(r));
    rep.tables.push(t);
    Ok(rep)
}
