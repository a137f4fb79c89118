//! Space-time leapfrog runs started from discrete travelling waves.

use leapwave_core::dtw::continuation::initial_seed;
use leapwave_core::dtw::newton::{smooth_newton_wave, NewtonOptions};
use leapwave_core::pdesim::{transport_with_perturbation, wave_transport_test};
use leapwave_core::{FourierWave, Nonlinearity, WaveParams};
use rand::{rngs::StdRng, Rng, SeedableRng};
use std::f64::consts::PI;

/// `sigma = 2 kappa` with `kappa` equal to the collocation spacing, so the
/// space-time grid lands on collocation points.
fn wave(c: f64, t: f64, n: usize) -> (FourierWave, WaveParams) {
    let kappa = t / (2.0 * n as f64);
    let p = WaveParams::new(c, 2.0 * kappa, kappa, 0.5 * t).unwrap();
    let seed = initial_seed(&Nonlinearity::Sine, c, t, n).unwrap();
    let run = smooth_newton_wave(&Nonlinearity::Sine, &p, n, &seed, &NewtonOptions::default()).unwrap();
    (run.wave, p)
}

#[test]
fn converged_wave_is_transported() {
    let (w, p) = wave(0.5, 2.0 * PI, 512);
    let r = wave_transport_test(&Nonlinearity::Sine, &w, &p, 1000).unwrap();
    assert!(r.initial_residual <= 1e-8, "{}", r.initial_residual);
    assert!(r.cfl_flagged);
    assert!(r.max_deviation <= 1e-6, "{}", r.max_deviation);
}

#[test]
fn perturbed_wave_stays_bounded_below_cfl_one() {
    let (w, p) = wave(0.6, 2.0 * PI, 256);
    let mut rng = StdRng::seed_from_u64(7);
    let m = (w.period() / p.sigma).round() as usize;
    let noise: Vec<f64> = (0..m).map(|_| rng.random_range(-1e-3..1e-3)).collect();
    let r = transport_with_perturbation(&Nonlinearity::Sine, &w, &p, 1000, Some(&noise)).unwrap();
    assert!(!r.cfl_flagged && r.cfl < 1.0);
    assert!(r.max_deviation.is_finite() && r.max_deviation < 4.0 * PI, "{}", r.max_deviation);
}
