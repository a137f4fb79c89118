//! Continuation of smooth travelling waves in the period `T`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::newton::{smooth_newton_wave, NewtonOptions, NewtonRun};
use crate::error::{Error, Result};
use crate::exact::{default_centre, pendulum_periodic_wave};
use crate::nonlin::Nonlinearity;
use crate::spectral::{FourierWave, WaveParams};

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationStep {
    pub t: f64,
    pub run: Option<NewtonRun>,
    pub failure: Option<String>,
    /// Whether the step was retried through an intermediate period.
    pub halved: bool,
}

/// First seed: the continuous pendulum orbit with the requested period, or a
/// small cosine about the centre when no such orbit exists.
pub fn initial_seed(nl: &Nonlinearity, c: f64, t: f64, n: usize) -> Result<FourierWave> {
    match pendulum_periodic_wave(nl, c, t, n) {
        Ok((w, _)) => Ok(w),
        Err(_) => {
            let centre = default_centre(nl, c)?;
            let mut w = FourierWave::zeros(0.5 * t, n);
            w.set(0, Complex64::new(centre, 0.0));
            w.set_hermitian(1, Complex64::new(0.05, 0.0));
            Ok(w)
        }
    }
}

pub fn continuation_in_t(
    nl: &Nonlinearity,
    sigma: f64,
    kappa: f64,
    c: f64,
    tgrid: &[f64],
    n: usize,
    opts: &NewtonOptions,
) -> Result<Vec<ContinuationStep>> {
    if tgrid.is_empty() {
        return Ok(Vec::new());
    }
    if tgrid[0] < 2.0 * PI - 1e-12 || tgrid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("T grid must be increasing and start at or above 2 pi".into()));
    }
    let base = WaveParams::new(c, sigma, kappa, 0.5 * tgrid[0])?;
    base.require_noncritical()?;
    let mut seed = initial_seed(nl, c, tgrid[0], n)?;
    let mut last_t = tgrid[0];
    let mut out = Vec::with_capacity(tgrid.len());
    for &t in tgrid {
        let p = base.with_tau(0.5 * t);
        let mut halved = false;
        let mut attempt = smooth_newton_wave(nl, &p, n, &seed, opts);
        if attempt.is_err() && t > last_t {
            halved = true;
            let mid = 0.5 * (last_t + t);
            if let Ok(r) = smooth_newton_wave(nl, &base.with_tau(0.5 * mid), n, &seed, opts) {
                attempt = smooth_newton_wave(nl, &p, n, &r.wave, opts);
            }
        }
        match attempt {
            Ok(run) => {
                seed = run.wave.clone();
                last_t = t;
                out.push(ContinuationStep { t, run: Some(run), failure: None, halved });
            }
            Err(e) => out.push(ContinuationStep { t, run: None, failure: Some(e.to_string()), halved }),
        }
    }
    Ok(out)
}

/// Local maxima of `R` along a continuation (converged steps only).
pub fn resonance_peaks(steps: &[ContinuationStep]) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = steps.iter().filter_map(|s| s.run.as_ref().map(|r| (s.t, r.resonance_r))).collect();
    pts.windows(3).filter(|w| w[1].1 > w[0].1 && w[1].1 > w[2].1).map(|w| w[1]).collect()
}
