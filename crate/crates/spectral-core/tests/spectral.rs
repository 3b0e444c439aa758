use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectral_core::{noise, Complex64, ComplexField, Differentiable, Error, Grid, RealField};

fn nu(x: f64) -> f64 {
    3.0 / (x / 2.0).cosh().powi(2)
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn single_mode_derivative() {
    let g = Grid::periodic(7.0, 64).unwrap();
    let m = 3.0;
    let w = 2.0 * PI * m / 7.0;
    let f = RealField::from_fn(g.clone(), |x| (w * x).sin()).unwrap();
    let d = f.spectral_derivative(1).unwrap();
    let exact: Vec<f64> = g.points().iter().map(|x| w * (w * x).cos()).collect();
    assert!(max_err(d.data(), &exact) <= 1e-12 * w);
}

#[test]
fn constant_has_zero_derivatives() {
    let g = Grid::periodic(10.0, 32).unwrap();
    let f = RealField::from_fn(g, |_| 2.5).unwrap();
    for order in 1..=8 {
        assert!(f.derivative(order).unwrap().max_abs() < 1e-12);
    }
}

#[test]
fn soliton_profile_derivative() {
    let g = Grid::periodic(100.0, 1024).unwrap();
    let f = RealField::from_fn(g.clone(), nu).unwrap();
    let d = f.derivative(1).unwrap();
    let exact: Vec<f64> = g
        .points()
        .iter()
        .map(|&x| -3.0 * (x / 2.0).tanh() / (x / 2.0).cosh().powi(2))
        .collect();
    assert!(max_err(d.data(), &exact) <= 1e-10);
}

#[test]
fn derivative_order_is_checked() {
    let g = Grid::periodic(10.0, 32).unwrap();
    let f = RealField::zeros(g).unwrap();
    assert!(matches!(f.derivative(0), Err(Error::InvalidArgument(_))));
    assert!(matches!(f.derivative(9), Err(Error::InvalidArgument(_))));
}

#[test]
fn grid_validation() {
    assert!(Grid::periodic(10.0, 12).is_err());
    assert!(Grid::periodic(10.0, 4).is_err());
    assert!(Grid::periodic(-1.0, 16).is_err());
    let g = Grid::periodic(10.0, 16).unwrap();
    assert_relative_eq!(g.dx(), 10.0 / 16.0);
    assert_relative_eq!(g.points()[0], -5.0);
}

#[test]
fn quadrature() {
    let g = Grid::periodic(100.0, 1024).unwrap();
    let one = RealField::from_fn(g.clone(), |_| 1.0).unwrap();
    assert_relative_eq!(one.integrate(), 100.0, epsilon = 1e-12);
    let f = RealField::from_fn(g.clone(), nu).unwrap();
    assert!((f.integrate() - 12.0).abs() < 1e-10);
    let s = RealField::from_fn(g, |x| (2.0 * PI * x / 100.0).sin()).unwrap();
    assert!(s.integrate().abs() < 1e-12);
}

#[test]
fn sobolev_examples() {
    let g = Grid::periodic(20.0, 64).unwrap();
    let c = RealField::from_fn(g.clone(), |_| -1.5).unwrap();
    for s in 0..=4 {
        assert_relative_eq!(c.sobolev_norm(s).unwrap(), 1.5 * 20f64.sqrt(), max_relative = 1e-12);
    }
    let k = 2.0 * PI * 4.0 / 20.0;
    let a = 0.7;
    let f = RealField::from_fn(g.clone(), |x| a * (k * x).sin()).unwrap();
    let expect = a * (10.0f64).sqrt() * (1.0 + k * k).sqrt();
    assert_relative_eq!(f.sobolev_norm(1).unwrap(), expect, max_relative = 1e-12);
    assert!(f.sobolev_norm(5).is_err());

    let g = Grid::periodic(100.0, 1024).unwrap();
    let v = RealField::from_fn(g, nu).unwrap();
    assert!((v.sobolev_norm(0).unwrap() - 24f64.sqrt()).abs() < 1e-8);
}

#[test]
fn shift_examples() {
    let g = Grid::periodic(100.0, 1024).unwrap();
    let v = RealField::from_fn(g.clone(), nu).unwrap();
    assert!(max_err(v.shift(0.0).data(), v.data()) < 1e-13);
    assert!(max_err(v.shift(100.0).data(), v.data()) < 1e-12);
    let s = v.shift(5.0);
    let (imax, _) = s
        .data()
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |(i, m), (j, &y)| if y > m { (j, y) } else { (i, m) });
    assert!((g.points()[imax] - 5.0).abs() <= g.dx());
    let exact: Vec<f64> = g.points().iter().map(|x| nu(x - 5.0)).collect();
    assert!(max_err(s.data(), &exact) < 1e-10);
}

#[test]
fn twisted_shift_by_period_picks_up_phase() {
    let alpha = 1.3;
    let g = Grid::twisted(10.0, 64, alpha).unwrap();
    let psi = ComplexField::from_fn(g.clone(), |x| {
        Complex64::from_polar(1.0, alpha * (x + 5.0) / 10.0) * (1.0 + 0.2 * (2.0 * PI * x / 10.0).cos())
    })
    .unwrap();
    let s = psi.shift(10.0);
    let rot = Complex64::from_polar(1.0, -alpha);
    for (a, b) in s.data().iter().zip(psi.data()) {
        assert!((a - rot * b).norm() < 1e-12);
    }
}

#[test]
fn twisted_derivative_of_plane_wave() {
    let alpha = 0.8;
    let l = 12.0;
    let g = Grid::twisted(l, 32, alpha).unwrap();
    let kap = 2.0 * PI * 2.0 / l + alpha / l;
    let psi = ComplexField::from_fn(g, |x| Complex64::from_polar(1.0, kap * x)).unwrap();
    let d = psi.derivative(3).unwrap();
    for (a, b) in d.data().iter().zip(psi.data()) {
        let want = Complex64::new(0.0, kap).powu(3) * b;
        assert!((a - want).norm() < 1e-12);
    }
}

#[test]
fn antiderivative_recovers_field() {
    let g = Grid::periodic(80.0, 512).unwrap();
    let f: Vec<f64> = g.points().iter().map(|&x| nu(x) + 0.3).collect();
    let (mean, p) = g.antiderivative_real(&f);
    assert_relative_eq!(mean, 0.3 + 12.0 / 80.0, max_relative = 1e-10);
    let dp = g.derivative_real(&p, 1).unwrap();
    let back: Vec<f64> = dp.iter().map(|v| v + mean).collect();
    assert!(max_err(&back, &f) < 1e-10);
}

#[test]
fn upsample_is_interpolation() {
    let g = Grid::twisted(10.0, 32, 0.4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = noise::band_limited_noise(&g, 4, &mut rng);
    let (fine, v) = g.upsample(&u, 4).unwrap();
    assert_eq!(fine.n(), 128);
    for (j, z) in u.iter().enumerate() {
        assert!((v[4 * j] - z).norm() < 1e-12);
    }
    assert!(g.bandwidth(&u, 1e-12) <= 4);
}

#[test]
fn loglog_slope_of_power_law() {
    let x = [0.4, 0.3, 0.2, 0.1];
    let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powi(2)).collect();
    let (p, r) = spectral_core::loglog_slope(&x, &y);
    assert_relative_eq!(p, 2.0, epsilon = 1e-12);
    assert!(r < 1e-12);
}

fn smooth(seed: u64, g: &Grid) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    noise::band_limited_real(g, g.n() / 8, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integration_by_parts(seed in 0u64..10_000, l in 5.0f64..80.0) {
        let g = Grid::periodic(l, 128).unwrap();
        let f = smooth(seed, &g);
        let h = smooth(seed + 1, &g);
        let df = g.derivative_real(&f, 1).unwrap();
        let dh = g.derivative_real(&h, 1).unwrap();
        let lhs = g.integrate(&df.iter().zip(&h).map(|(a, b)| a * b).collect::<Vec<_>>());
        let rhs = -g.integrate(&f.iter().zip(&dh).map(|(a, b)| a * b).collect::<Vec<_>>());
        let scale = lhs.abs().max(1e-3 * l);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }

    #[test]
    fn shift_roundtrip(seed in 0u64..10_000, a in -30.0f64..30.0) {
        let g = Grid::periodic(20.0, 64).unwrap();
        let f = smooth(seed, &g);
        let back = g.shift_real(&g.shift_real(&f, a), -a);
        prop_assert!(max_err(&back, &f) < 1e-12);
    }

    #[test]
    fn twisted_shift_roundtrip(seed in 0u64..10_000, a in -30.0f64..30.0, alpha in -3.0f64..3.0) {
        let g = Grid::twisted(20.0, 64, alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = noise::band_limited_noise(&g, 8, &mut rng);
        let back = g.shift(&g.shift(&u, a), -a);
        let err = back.iter().zip(&u).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn sobolev_parseval(seed in 0u64..10_000) {
        let g = Grid::periodic(30.0, 128).unwrap();
        let f = RealField::new(g.clone(), smooth(seed, &g)).unwrap();
        let d = f.derivative(1).unwrap();
        let lhs = f.sobolev_norm(0).unwrap().powi(2) + d.sobolev_norm(0).unwrap().powi(2);
        let rhs = f.sobolev_norm(1).unwrap().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
    }
}
