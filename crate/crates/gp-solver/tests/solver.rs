use std::f64::consts::SQRT_2;

use gp_solver::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectral_core::{noise, Complex64, ComplexField, Error, Grid, RealField};

fn sup(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

#[test]
fn constant_states_are_stationary() {
    let g = Grid::periodic(30.0, 128).unwrap();
    for z in [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, 0.7)] {
        let s = GpState::new(ComplexField::constant(g.clone(), z).unwrap(), 0.0);
        let out = gp_evolve(&s, 2.0, 0.01, &[]).unwrap();
        let last = out.last().unwrap();
        assert!(sup(last.psi.data(), s.psi.data()) < 1e-13);
    }
}

#[test]
fn soliton_solves_travelling_wave_ode() {
    let spec = SolitonSpec::new(1.0, 0.0).unwrap();
    let g = spec.grid(60.0, 1024).unwrap();
    let v = dark_soliton(&spec, &g).unwrap();
    let d1 = v.derivative(1).unwrap();
    let d2 = v.derivative(2).unwrap();
    let mut res = 0.0f64;
    for j in 0..g.n() {
        let z = v.data()[j];
        let r = Complex64::i() * spec.c * d1.data()[j] + d2.data()[j] - z * (z.norm_sqr() - 1.0);
        res = res.max(r.norm());
    }
    assert!(res <= 1e-10, "residual {res}");
    let eta = v.eta();
    let peak = eta.iter().fold(0.0f64, |m, &e| m.max(e));
    assert!((peak - 0.5).abs() < 1e-12);
}

#[test]
fn soliton_spec_validation() {
    assert!(matches!(SolitonSpec::new(1.5, 0.0), Err(Error::InvalidArgument(_))));
    assert!(SolitonSpec::new(-0.1, 0.0).is_err());
    let black = SolitonSpec::new(0.0, 0.0).unwrap();
    let g = black.grid(40.0, 256).unwrap();
    let v = dark_soliton(&black, &g).unwrap();
    assert!(v.data().iter().all(|z| z.im.abs() < 1e-15));
    assert!(matches!(madelung(&v), Err(Error::VacuumCrossing { .. })));
    let wrong = Grid::periodic(40.0, 256).unwrap();
    assert!(dark_soliton(&SolitonSpec::new(1.0, 0.0).unwrap(), &wrong).is_err());
}

#[test]
fn shallow_soliton_is_nearly_constant() {
    let spec = SolitonSpec::new(SQRT_2 - 1e-10, 0.0).unwrap();
    let g = spec.grid(40.0, 128).unwrap();
    let v = dark_soliton(&spec, &g).unwrap();
    assert!(v.eta().iter().all(|e| e.abs() < 1e-9));
}

#[test]
fn soliton_travels_at_speed_c() {
    let spec = SolitonSpec::new(0.9, 0.0).unwrap();
    let g = spec.grid(60.0, 512).unwrap();
    let v0 = dark_soliton(&spec, &g).unwrap();
    let traj = gp_evolve(&GpState::new(v0.clone(), 0.0), 5.0, 1e-3, &[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_eq!(traj.len(), 6);
    for s in &traj {
        let exact = v0.shift(-spec.c * s.t);
        assert!(s.psi.sup_distance(&exact).unwrap() <= 1e-5, "t = {}", s.t);
    }
    let one = &traj[1];
    assert!((one.t - 1.0).abs() < 1e-12);
    assert!(one.psi.l2_distance(&v0.shift(-spec.c)).unwrap() <= 1e-6);
}

#[test]
fn empty_evolution_returns_initial_state() {
    let g = Grid::periodic(10.0, 32).unwrap();
    let s = GpState::new(ComplexField::constant(g, Complex64::new(1.0, 0.0)).unwrap(), 3.0);
    let out = gp_evolve(&s, 3.0, 0.1, &[]).unwrap();
    assert_eq!(out.len(), 1);
    assert!(gp_evolve(&s, 2.0, 0.1, &[]).is_err());
    assert!(gp_step(&s, 0.0).is_err());
}

fn bump(seed: u64) -> ComplexField {
    bump_on(seed, 128)
}

fn bump_on(seed: u64, n: usize) -> ComplexField {
    let g = Grid::twisted(20.0, n, 0.6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = noise::band_limited_noise(&g, 8, &mut rng);
    let data = g.phase().iter().zip(&w).map(|(p, z)| p + 0.2 * z).collect();
    ComplexField::new(g, data).unwrap()
}

#[test]
fn halves_compose_bit_identically() {
    let psi = bump(3);
    let s = GpState::new(psi, 0.0);
    let full = gp_evolve(&s, 1.0, 0.125, &[]).unwrap().pop().unwrap();
    let half = gp_evolve(&s, 0.5, 0.125, &[]).unwrap().pop().unwrap();
    let two = gp_evolve(&half, 1.0, 0.125, &[]).unwrap().pop().unwrap();
    assert_eq!(full.psi.data(), two.psi.data());
}

#[test]
fn madelung_examples() {
    let g = Grid::periodic(10.0, 64).unwrap();
    let one = ComplexField::constant(g.clone(), Complex64::new(1.0, 0.0)).unwrap();
    let m = madelung(&one).unwrap();
    assert!(m.eta.max_abs() < 1e-15 && m.phase_derivative.max_abs() < 1e-15);
    assert_eq!(m.phase_base, 0.0);

    let (eta0, phi0) = (0.3, -1.1);
    let c = ComplexField::constant(g, Complex64::from_polar((1.0f64 - eta0).sqrt(), phi0)).unwrap();
    let m = madelung(&c).unwrap();
    assert!(m.eta.data().iter().all(|e| (e - eta0).abs() < 1e-14));
    assert!(m.phase_derivative.max_abs() < 1e-13);
    assert!((m.phase_base - phi0).abs() < 1e-14);
}

#[test]
fn madelung_of_soliton() {
    let spec = SolitonSpec::new(1.0, 0.0).unwrap();
    let e = spec.epsilon();
    let g = spec.grid(60.0, 1024).unwrap();
    let v = dark_soliton(&spec, &g).unwrap();
    let m = madelung(&v).unwrap();
    for (x, eta) in g.points().iter().zip(m.eta.data()) {
        let exact = 0.5 * e * e / (0.5 * e * x).cosh().powi(2);
        assert!((eta - exact).abs() < 1e-10);
    }
    let back = m.reconstruct(g.twist()).unwrap();
    assert!(back.sup_distance(&v).unwrap() < 1e-10);
}

fn nu(x: f64) -> f64 {
    3.0 / (x / 2.0).cosh().powi(2)
}

#[test]
fn long_wave_data_of_soliton_profile() {
    let eps: f64 = 0.5;
    let gs = Grid::periodic(80.0, 1024).unwrap();
    let n0 = RealField::from_fn(gs.clone(), nu).unwrap();
    let a = (1.0 - eps * eps / 2.0).sqrt();
    let th = RealField::from_fn(gs.clone(), |x| a * nu(x) / (1.0 - eps * eps * nu(x) / 6.0)).unwrap();
    let psi = long_wave_data(&n0, &th, eps).unwrap();
    let spec = SolitonSpec::from_epsilon(eps, 0.0).unwrap();
    assert!((psi.grid().length() - 160.0).abs() < 1e-12);
    assert!((psi.grid().twist() - spec.twist()).abs() < 1e-10);
    let v = ComplexField::from_fn(psi.grid().clone(), |x| spec.profile(x)).unwrap();
    let rot = v.data()[0] / psi.data()[0];
    let err = psi.data().iter().zip(v.data()).fold(0.0f64, |m, (p, q)| m.max((rot * p - q).norm()));
    assert!(err <= 1e-8, "sup error {err}");
}

#[test]
fn long_wave_data_trivial_and_bounds() {
    let gs = Grid::periodic(20.0, 64).unwrap();
    let z = RealField::zeros(gs.clone()).unwrap();
    let psi = long_wave_data(&z, &z, 0.3).unwrap();
    assert!(psi.data().iter().all(|u| (u - 1.0).norm() < 1e-15));
    let deep = RealField::from_fn(gs, |_| 100.0).unwrap();
    assert!(long_wave_data(&deep, &z, 0.5).is_err());
    assert!(long_wave_data(&z, &z, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gauge_covariance(seed in 0u64..1000, th in -3.0f64..3.0) {
        let psi = bump(seed);
        let rot = Complex64::from_polar(1.0, th);
        let rotated = ComplexField::new(psi.grid().clone(), psi.data().iter().map(|z| rot * z).collect()).unwrap();
        let a = gp_evolve(&GpState::new(psi, 0.0), 0.5, 0.01, &[]).unwrap().pop().unwrap();
        let b = gp_evolve(&GpState::new(rotated, 0.0), 0.5, 0.01, &[]).unwrap().pop().unwrap();
        let err = a.psi.data().iter().zip(b.psi.data()).fold(0.0f64, |m, (x, y)| m.max((rot * x - y).norm()));
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn translation_covariance(seed in 0u64..1000, a in -10.0f64..10.0) {
        let psi = bump(seed);
        let st = GpState::new(psi.shift(a), 0.0);
        let lhs = gp_evolve(&st, 0.5, 0.01, &[]).unwrap().pop().unwrap();
        let rhs = gp_evolve(&GpState::new(psi, 0.0), 0.5, 0.01, &[]).unwrap().pop().unwrap();
        prop_assert!(lhs.psi.sup_distance(&rhs.psi.shift(a)).unwrap() < 1e-10);
    }

    #[test]
    fn madelung_roundtrip(seed in 0u64..1000) {
        // phase and modulus are not band-limited, so the lift needs headroom
        let psi = bump_on(seed, 512);
        let m = madelung(&psi).unwrap();
        let back = m.reconstruct(psi.grid().twist()).unwrap();
        prop_assert!(back.sup_distance(&psi).unwrap() < 1e-10 * psi.max_abs());
    }
}
