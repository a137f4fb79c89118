//! Resonance measure and windowed spreads of `|phi''|`.

use crate::spectral::FourierWave;

/// Interior points of `(lo, hi)`: `count` of them, uniformly spaced.
pub fn window_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| lo + (hi - lo) * k as f64 / (count + 1) as f64).collect()
}

/// `max - min` of `|g|` over `count` interior points of `(lo, hi)`.
pub fn window_spread(g: &FourierWave, lo: f64, hi: f64, count: usize) -> f64 {
    let v: Vec<f64> = g.evaluate_many(&window_points(lo, hi, count)).into_iter().map(f64::abs).collect();
    let mx = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mn = v.iter().cloned().fold(f64::INFINITY, f64::min);
    mx - mn
}

/// `R = log10(max |phi''| - min |phi''|)` over `(0.2 T, 0.3 T)`, sampled on
/// 1000 points. A flat window gives `-inf`.
pub fn resonance_measure(w: &FourierWave) -> f64 {
    let t = w.period();
    let d2 = w.spectral_derivative(2);
    let spread = window_spread(&d2, 0.2 * t, 0.3 * t, 1000);
    if spread > 0.0 {
        spread.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// The measure for a wave whose turning point sits at `xi = 0`: the profile
/// is translated so that the turning point lands at `T/4`, the middle of the window.
pub fn resonance_measure_centred(w: &FourierWave) -> f64 {
    resonance_measure(&w.shifted(-0.25 * w.period()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn cosine_closed_form() {
        let tau = 3.0;
        let mut w = FourierWave::zeros(tau, 2);
        w.set_hermitian(1, Complex64::new(0.5, 0.0));
        let pts = window_points(0.4 * tau, 0.6 * tau, 1000);
        let vals: Vec<f64> = pts.iter().map(|x| (PI / tau).powi(2) * (PI * x / tau).cos().abs()).collect();
        let spread = vals.iter().cloned().fold(0.0, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((resonance_measure(&w) - spread.log10()).abs() < 1e-10);
        // closed form without sampling: (pi/tau)^2 cos(0.4 pi) up to the min near zero
        assert!((spread - (PI / tau).powi(2) * (0.4 * PI).cos()).abs() < 1e-2 * spread);
    }

    #[test]
    fn flat_wave_sentinel() {
        let mut w = FourierWave::zeros(2.0, 3);
        w.set(0, Complex64::new(1.5, 0.0));
        assert_eq!(resonance_measure(&w), f64::NEG_INFINITY);
    }
}
