use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::grid::Grid;

/// Complex band-limited noise (quasi-periodic with the grid twist) with modes `|m| <= modes`, scaled to unit sup norm.
pub fn band_limited_noise<R: Rng + ?Sized>(grid: &Grid, modes: usize, rng: &mut R) -> Vec<Complex64> {
    let n = grid.n();
    let modes = modes.min(n / 2 - 1);
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for m in 0..=modes {
        for slot in [m, (n - m) % n] {
            c[slot] = Complex64::new(gauss(rng), gauss(rng));
            if m == 0 {
                break;
            }
        }
    }
    normalize(grid.synthesize(c))
}

/// Real band-limited noise, unit sup norm.
pub fn band_limited_real<R: Rng + ?Sized>(grid: &Grid, modes: usize, rng: &mut R) -> Vec<f64> {
    let z = band_limited_noise(grid, modes, rng);
    let re: Vec<f64> = z.iter().map(|z| z.re).collect();
    let peak = re.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    re.into_iter().map(|v| v / peak).collect()
}

fn normalize(c: Vec<Complex64>) -> Vec<Complex64> {
    let peak = c.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return c;
    }
    c.into_iter().map(|z| z / peak).collect()
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
