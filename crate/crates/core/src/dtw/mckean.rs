//! Periodic McKean waves: `phi_n = h_n / (1 + d_n)` with square-wave forcing.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::spectrum::denominator;
use crate::error::{Error, Result};
use crate::spectral::{dft_complex, idft, FourierWave, WaveParams};

/// Fourier coefficient of the square wave equal to 0 on `[0, tau)` and 1 on
/// `(tau, 2 tau)`.
pub fn square_wave_coeff(n: i64) -> Complex64 {
    if n == 0 {
        Complex64::new(0.5, 0.0)
    } else if n % 2 == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        // ((-1)^n - 1) / (2 i n pi) = i / (n pi)
        Complex64::new(0.0, 1.0 / (n as f64 * PI))
    }
}

/// `phi_n` for a single index, computed in closed form.
#[inline]
pub fn mckean_coeff(p: &WaveParams, n: i64) -> Complex64 {
    if n != 0 && n % 2 == 0 {
        return Complex64::new(0.0, 0.0);
    }
    square_wave_coeff(n) / (1.0 + denominator(p, n as f64))
}

#[derive(Debug, Clone, Serialize)]
pub struct McKeanDiagnostics {
    pub a: f64,
    pub n: usize,
    /// `max |phi_n|` over `0.9 N < n <= N`.
    pub trailing_max: f64,
    /// `max n|phi_n|` over `(N/10, N]` divided by the same over `(N/100, N/10]`.
    /// Bounded denominators give exactly 1; growth means small denominators.
    pub decade_ratio: Option<f64>,
    pub divergent: bool,
    pub min_denominator: f64,
    pub min_denominator_index: i64,
}

#[derive(Debug, Clone)]
pub struct McKeanWave {
    pub wave: FourierWave,
    pub diagnostics: McKeanDiagnostics,
}

/// Threshold on the decade ratio above which the series is flagged.
pub const DIVERGENCE_RATIO: f64 = 1.1;

pub fn mckean_periodic_wave(a: f64, params: &WaveParams, n: usize) -> Result<McKeanWave> {
    params.validate()?;
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParams(format!("threshold a={a} must lie in (0,1)")));
    }
    if n == 0 {
        return Err(Error::InvalidParams("N must be at least 1".into()));
    }
    let half: Vec<(Complex64, f64)> = (0..=n as i64)
        .into_par_iter()
        .map(|k| {
            let den = 1.0 + denominator(params, k as f64);
            (mckean_coeff(params, k), den)
        })
        .collect();
    let mut min_den = f64::INFINITY;
    let mut min_idx = 1;
    for (k, &(_, den)) in half.iter().enumerate().skip(1).step_by(2) {
        if den.abs() < min_den {
            min_den = den.abs();
            min_idx = k as i64;
        }
    }
    if min_den < 1e-12 {
        return Err(Error::Resonant { index: min_idx, value: min_den });
    }
    let coeffs: Vec<Complex64> = half.iter().map(|h| h.0).collect();
    let wave = FourierWave::from_half(params.tau, &coeffs);
    let trailing_max = range_max(&coeffs, (9 * n) / 10 + 1, n, false);
    let decade_ratio = if n >= 100 {
        let top = range_max(&coeffs, n / 10 + 1, n, true);
        let below = range_max(&coeffs, n / 100 + 1, n / 10, true);
        Some(top / below)
    } else {
        None
    };
    let divergent = decade_ratio.map(|r| r > DIVERGENCE_RATIO).unwrap_or(false);
    Ok(McKeanWave {
        wave,
        diagnostics: McKeanDiagnostics {
            a,
            n,
            trailing_max,
            decade_ratio,
            divergent,
            min_denominator: min_den,
            min_denominator_index: min_idx,
        },
    })
}

fn range_max(c: &[Complex64], lo: usize, hi: usize, weighted: bool) -> f64 {
    (lo..=hi.min(c.len() - 1))
        .map(|k| c[k].norm() * if weighted { k as f64 } else { 1.0 })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub n_min: u64,
    pub n_max: u64,
    pub threshold: f64,
    pub count_above: u64,
    pub first_above: Option<u64>,
    pub largest: f64,
    pub largest_index: u64,
}

/// Streams `|phi_n|` over odd `n` in `(n_min, n_max]` without storing the series.
pub fn mckean_scan(params: &WaveParams, n_min: u64, n_max: u64, threshold: f64) -> ScanReport {
    const CHUNK: u64 = 1 << 16;
    let start = n_min + 1;
    let chunks: Vec<(u64, u64)> = (start..=n_max).step_by(CHUNK as usize).map(|s| (s, (s + CHUNK - 1).min(n_max))).collect();
    let parts: Vec<(u64, Option<u64>, f64, u64)> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut count = 0;
            let mut first = None;
            let mut best = 0.0;
            let mut best_i = 0;
            let mut k = if lo % 2 == 1 { lo } else { lo + 1 };
            while k <= hi {
                let v = (1.0 / (k as f64 * PI)) / (1.0 + denominator(params, k as f64)).abs();
                if v >= threshold {
                    count += 1;
                    first.get_or_insert(k);
                }
                if v > best {
                    best = v;
                    best_i = k;
                }
                k += 2;
            }
            (count, first, best, best_i)
        })
        .collect();
    let mut rep = ScanReport { n_min, n_max, threshold, count_above: 0, first_above: None, largest: 0.0, largest_index: 0 };
    for (count, first, best, bi) in parts {
        rep.count_above += count;
        if rep.first_above.is_none() {
            rep.first_above = first;
        }
        if best > rep.largest {
            rep.largest = best;
            rep.largest_index = bi;
        }
    }
    rep
}

/// Solves the travelling-wave equation directly on the lattice
/// `xi_j = offset + j kappa`, which needs `2 tau / kappa` and
/// `sigma / kappa` to be integers. Returns the lattice values.
pub fn mckean_lattice_wave(params: &WaveParams, offset: f64) -> Result<Vec<f64>> {
    let mf = 2.0 * params.tau / params.kappa;
    let rf = params.sigma / params.kappa;
    let m = mf.round();
    let r = rf.round();
    if (mf - m).abs() > 1e-9 * mf || (rf - r).abs() > 1e-9 * rf || m < 2.0 {
        return Err(Error::InvalidParams("lattice solve needs 2 tau/kappa and sigma/kappa integral".into()));
    }
    let m = m as usize;
    let h: Vec<Complex64> = (0..m)
        .map(|j| {
            let xi = (offset + j as f64 * params.kappa).rem_euclid(2.0 * params.tau);
            Complex64::new(if xi >= params.tau { 1.0 } else { 0.0 }, 0.0)
        })
        .collect();
    let mut spec = dft_complex(&h);
    for (k, z) in spec.iter_mut().enumerate() {
        let den = 1.0 + denominator(params, crate::spectral::signed_index(k, m) as f64);
        if den.abs() < 1e-12 {
            return Err(Error::Resonant { index: k as i64, value: den });
        }
        *z /= den;
    }
    Ok(idft(&spec).into_iter().map(|z| z.re).collect())
}

/// Largest deviation from the mean over the lattice midpoints
/// `(j + 1/2) kappa` inside `(lo, hi)`. The discrete wave is constant
/// between lattice points, so midpoints stay clear of its jumps.
pub fn plateau_wiggle(wave: &FourierWave, kappa: f64, lo: f64, hi: f64) -> f64 {
    let first = (lo / kappa - 0.5).ceil() as i64;
    let xs: Vec<f64> = (first..).map(|j| (j as f64 + 0.5) * kappa).take_while(|&x| x < hi).filter(|&x| x > lo).collect();
    let vals = wave.evaluate_many(&xs);
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max)
}
