//! Discrete periodic sawtooth waves.
//!
//! With `chi` the indicator of `|phi| < 1`, the force is
//! `-V'(phi) = (2 chi - 1) phi + 2 chi_up - 2 chi_down`, so in Fourier space
//! `(diag(d) - A) phi = b` with `A` the convolution by `s = 2 chi - 1`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::spectrum::denominator;
use crate::error::{Error, Result};
use crate::exact::sawtooth_periodic_wave;
use crate::roots::brent;
use crate::spectral::{FourierWave, WaveParams};

/// Fourier coefficient of `s = 2 chi - 1`, where `chi` covers the intervals of
/// half-width `xi_star` around `0` and `tau`.
pub fn kernel_coeff(m: i64, xi_star: f64, tau: f64) -> f64 {
    if m == 0 {
        4.0 * xi_star / tau - 1.0
    } else if m % 2 != 0 {
        0.0
    } else {
        4.0 * (m as f64 * PI * xi_star / tau).sin() / (m as f64 * PI)
    }
}

/// `b_n = ((1 - (-1)^n)/(i n pi)) (exp(-i n pi xi*/tau) + exp(i n pi xi*/tau))`.
pub fn forcing_coeff(n: i64, xi_star: f64, tau: f64) -> Complex64 {
    if n % 2 == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let c = 2.0 * (n as f64 * PI * xi_star / tau).cos();
    Complex64::new(0.0, -2.0 * c / (n as f64 * PI))
}

/// Solves the `(2N+1)` complex system for fixed `xi_star`.
pub fn full_system(params: &WaveParams, n: usize, xi_star: f64) -> Result<FourierWave> {
    let big = n as i64;
    let dim = 2 * n + 1;
    let mut a = DMatrix::<Complex64>::zeros(dim, dim);
    let mut b = DVector::<Complex64>::zeros(dim);
    for (r, nn) in (-big..=big).enumerate() {
        for (col, k) in (-big..=big).enumerate() {
            a[(r, col)] = Complex64::new(-kernel_coeff(nn - k, xi_star, params.tau), 0.0);
        }
        a[(r, r)] += denominator(params, nn as f64);
        b[r] = forcing_coeff(nn, xi_star, params.tau);
    }
    let x = a.lu().solve(&b).ok_or(Error::Singular)?;
    FourierWave::from_coeffs(params.tau, x.iter().copied().collect())
}

/// Sine coefficients `beta_n` (odd `n <= N`) of `phi = sum beta_n sin(n pi xi / tau)`.
pub fn sine_system(params: &WaveParams, n: usize, xi_star: f64) -> Result<Vec<f64>> {
    let idx: Vec<i64> = (1..=n as i64).step_by(2).collect();
    let dim = idx.len();
    let tau = params.tau;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let mut b = DVector::<f64>::zeros(dim);
    for (r, &nn) in idx.iter().enumerate() {
        for (col, &k) in idx.iter().enumerate() {
            a[(r, col)] = -(kernel_coeff(nn - k, xi_star, tau) - kernel_coeff(nn + k, xi_star, tau));
        }
        a[(r, r)] += denominator(params, nn as f64);
        b[r] = 8.0 * (nn as f64 * PI * xi_star / tau).cos() / (nn as f64 * PI);
    }
    let x = a.lu().solve(&b).ok_or(Error::Singular)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(x.iter().copied().collect())
}

fn sine_eval(beta: &[f64], tau: f64, xi: f64) -> f64 {
    beta.iter().enumerate().map(|(j, b)| b * ((2 * j + 1) as f64 * PI * xi / tau).sin()).sum()
}

fn sine_to_wave(beta: &[f64], tau: f64, n: usize) -> FourierWave {
    let mut w = FourierWave::zeros(tau, n);
    for (j, &b) in beta.iter().enumerate() {
        w.set_hermitian((2 * j + 1) as i64, Complex64::new(0.0, -0.5 * b));
    }
    w
}

#[derive(Debug, Clone, Serialize)]
pub struct SawtoothSolveInfo {
    pub xi_star: f64,
    pub xi_star_initial: f64,
    pub compatibility_residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SawtoothDiscrete {
    pub wave: FourierWave,
    pub info: SawtoothSolveInfo,
}

/// Solves for the discrete sawtooth wave, adjusting `xi_star` so that
/// `phi(xi_star) = 1`. Starts from the continuous wave's `xi_star`.
pub fn sawtooth_discrete_wave(params: &WaveParams, n: usize) -> Result<SawtoothDiscrete> {
    params.validate()?;
    params.require_noncritical()?;
    let tau = params.tau;
    let x0 = sawtooth_periodic_wave(params.c, tau)?.xi_star;
    let g = |xs: f64| -> Result<f64> { Ok(sine_eval(&sine_system(params, n, xs)?, tau, xs) - 1.0) };
    let tol = 1e-12;
    // secant from the analytic guess
    let (mut xa, mut xb) = (x0, x0 * (1.0 + 1e-3));
    let (mut ga, mut gb) = (g(xa)?, g(xb)?);
    let mut iters = 0;
    let mut root = None;
    while iters < 60 {
        iters += 1;
        if gb.abs() <= tol {
            root = Some(xb);
            break;
        }
        let step = gb * (xb - xa) / (gb - ga);
        if !step.is_finite() {
            break;
        }
        let xn = xb - step;
        if !(xn > 0.0 && xn < 0.5 * tau) {
            break;
        }
        xa = xb;
        ga = gb;
        xb = xn;
        gb = g(xb)?;
    }
    let xs = match root {
        Some(r) => r,
        None => {
            // bracket scan fallback
            let m = 200;
            let mut prev = None;
            let mut found = None;
            for k in 1..m {
                let x = 0.5 * tau * k as f64 / m as f64;
                let v = g(x)?;
                if let Some((px, pv)) = prev {
                    if f64::signum(pv) != f64::signum(v) {
                        found = Some((px, x));
                        break;
                    }
                }
                prev = Some((x, v));
            }
            let (lo, hi) = found.ok_or_else(|| Error::NoBracket("compatibility condition phi(xi*) = 1".into()))?;
            brent(|x| g(x).unwrap_or(f64::NAN), lo, hi, 1e-15, 200)?
        }
    };
    let beta = sine_system(params, n, xs)?;
    let res = sine_eval(&beta, tau, xs) - 1.0;
    Ok(SawtoothDiscrete {
        wave: sine_to_wave(&beta, tau, n),
        info: SawtoothSolveInfo { xi_star: xs, xi_star_initial: x0, compatibility_residual: res, iterations: iters },
    })
}
