//! Pseudospectral Newton solver for smooth nonlinearities.
//!
//! Unknowns are the values of an even wave on the collocation points
//! `xi_j = j T / (2N)`, `j = 0..=N`. Restricting to even waves removes the
//! translation null mode of the Jacobian.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::resonance::resonance_measure_centred;
use super::spectrum::DenominatorSpectrum;
use crate::error::{Error, Result};
use crate::nonlin::Nonlinearity;
use crate::spectral::{idft, FourierWave, WaveParams};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NewtonOptions {
    /// Converged when the residual sup-norm is at most `tol (1 + |phi|_inf)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-10, max_iter: 25 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NewtonRun {
    pub params: WaveParams,
    pub n: usize,
    #[serde(skip)]
    pub wave: FourierWave,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub resonance_r: f64,
    /// `max |phi_n|` over `0.9 N < |n| <= N`.
    pub tail_max: f64,
}

/// Even-subspace matrix of the circulant `L = F^-1 diag(d) F` on `2N` points.
pub fn even_operator(params: &WaveParams, n: usize) -> DMatrix<f64> {
    let m = 2 * n;
    let d = DenominatorSpectrum::new(*params, n).wrapped(m);
    let col: Vec<f64> = idft(&d.iter().map(|&v| num_complex::Complex64::new(v, 0.0)).collect::<Vec<_>>())
        .into_iter()
        .map(|z| z.re)
        .collect();
    let at = |k: i64| col[k.rem_euclid(m as i64) as usize];
    DMatrix::from_fn(n + 1, n + 1, |j, l| {
        let (j, l) = (j as i64, l as i64);
        if l == 0 || l == n as i64 {
            at(j - l)
        } else {
            at(j - l) + at(j + l)
        }
    })
}

fn full_from_even(u: &[f64]) -> Vec<f64> {
    let n = u.len() - 1;
    let mut v = u.to_vec();
    v.extend(u[1..n].iter().rev());
    v
}

/// Even collocation values of a wave on `N + 1` points.
pub fn even_samples(w: &FourierWave, tau: f64, n: usize) -> Vec<f64> {
    let m = 2 * n;
    let h = 2.0 * tau / m as f64;
    // evaluate the given coefficients on the new period
    let w = FourierWave::from_coeffs(tau, w.coeffs().to_vec()).expect("valid wave");
    (0..=n)
        .map(|j| {
            let x = j as f64 * h;
            0.5 * (w.eval(x) + w.eval(-x))
        })
        .collect()
}

pub fn smooth_newton_wave(nl: &Nonlinearity, params: &WaveParams, n: usize, initial: &FourierWave, opts: &NewtonOptions) -> Result<NewtonRun> {
    params.validate()?;
    if !nl.is_smooth() {
        return Err(Error::NotSmooth("Newton solver"));
    }
    if n < 2 || n > 1 << 12 {
        return Err(Error::InvalidParams(format!("N={n} must lie in 2..=4096")));
    }
    let l = even_operator(params, n);
    let mut u = DVector::from_vec(even_samples(initial, params.tau, n));
    let mut hist = Vec::new();
    let mut converged = false;
    for it in 0..=opts.max_iter {
        let mut r = &l * &u;
        for j in 0..=n {
            r[j] += nl.vprime(u[j])?;
        }
        let nr = r.amax();
        if !nr.is_finite() {
            return Err(Error::NonFinite("Newton residual".into()));
        }
        hist.push(nr);
        if nr <= opts.tol * (1.0 + u.amax()) {
            converged = true;
            break;
        }
        if it == opts.max_iter {
            break;
        }
        let mut jac = l.clone();
        for j in 0..=n {
            jac[(j, j)] += nl.derivative(u[j], 1)?;
        }
        let du = jac.lu().solve(&r).ok_or(Error::Singular)?;
        if du.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        u -= du;
    }
    if !converged {
        return Err(Error::NoConvergence { iterations: opts.max_iter, residual: *hist.last().unwrap() });
    }
    let wave = FourierWave::from_samples(params.tau, &full_from_even(u.as_slice()));
    let lo = (9 * n) / 10 + 1;
    let tail_max = (lo as i64..=n as i64).map(|k| wave.coeff(k).norm().max(wave.coeff(-k).norm())).fold(0.0, f64::max);
    let resonance_r = resonance_measure_centred(&wave);
    Ok(NewtonRun { params: *params, n, wave, residual_history: hist, converged, resonance_r, tail_max })
}

/// `r_{j+1} / r_j^2` for consecutive residuals with `r_j <= threshold`.
pub fn quadratic_ratios(hist: &[f64], threshold: f64) -> Vec<f64> {
    hist.windows(2).filter(|w| w[0] <= threshold && w[0] > 0.0).map(|w| w[1] / (w[0] * w[0])).collect()
}

/// For `sigma = kappa` the travelling-wave equation on `xi_0 + kappa Z` is the
/// leapfrog map for `y'' = -V'(y)/(c^2-1)` with step `kappa`. Seeds the map
/// with `phi(xi_0)`, `phi(xi_0 + kappa)` and returns the largest gap to the
/// wave over `steps` steps.
pub fn map_equivalence_error(nl: &Nonlinearity, params: &WaveParams, wave: &FourierWave, xi0: f64, steps: usize) -> Result<f64> {
    params.require_noncritical()?;
    if (params.sigma - params.kappa).abs() > 1e-14 * params.kappa {
        return Err(Error::InvalidParams("map equivalence needs sigma = kappa".into()));
    }
    let k = params.kappa;
    let a = params.c * params.c - 1.0;
    let (mut y0, mut y1) = (wave.eval(xi0), wave.eval(xi0 + k));
    let mut worst = 0.0f64;
    for s in 1..steps {
        let y2 = 2.0 * y1 - y0 - k * k * nl.vprime(y1)? / a;
        let exact = wave.eval(xi0 + (s + 1) as f64 * k);
        worst = worst.max((y2 - exact).abs());
        y0 = y1;
        y1 = y2;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtw::dtwe_residual;
    use crate::exact::pendulum_periodic_wave;
    use std::f64::consts::PI;

    #[test]
    fn operator_matches_fft_application() {
        let p = WaveParams::new(1.3, 1.0, 0.7, 3.5).unwrap();
        let n = 16;
        let l = even_operator(&p, n);
        let u: Vec<f64> = (0..=n).map(|j| (j as f64 * 0.37).cos() + 0.1 * j as f64).collect();
        let full = full_from_even(&u);
        let w = FourierWave::from_samples(p.tau, &full);
        let lw = {
            let mut o = w.clone();
            for k in -(n as i64)..=n as i64 {
                o.set(k, w.coeff(k) * super::super::spectrum::denominator(&p, k as f64));
            }
            o
        };
        let lu = &l * DVector::from_vec(u);
        for j in 0..=n {
            let x = j as f64 * 2.0 * p.tau / (2 * n) as f64;
            assert!((lu[j] - lw.eval(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_wave_is_fixed_point() {
        let p = WaveParams::new(1.3, 0.5, 0.5, PI).unwrap();
        let run = smooth_newton_wave(&Nonlinearity::Sine, &p, 32, &FourierWave::zeros(PI, 32), &NewtonOptions::default()).unwrap();
        assert!(run.converged);
        assert_eq!(run.residual_history, vec![0.0]);
    }

    #[test]
    fn converges_and_refines() {
        let c = 1.3;
        let t = 2.0 * PI;
        let p = WaveParams::new(c, 0.5, 0.5, 0.5 * t).unwrap();
        let (seed, _) = pendulum_periodic_wave(&Nonlinearity::Sine, c, t, 64).unwrap();
        let opts = NewtonOptions { tol: 1e-13, max_iter: 25 };
        let run = smooth_newton_wave(&Nonlinearity::Sine, &p, 64, &seed, &opts).unwrap();
        assert!(run.converged);
        // off-collocation residual of the continuous-variable equation
        let pts: Vec<f64> = (0..97).map(|k| t * (k as f64 + 0.31) / 97.0).collect();
        let r = dtwe_residual(&Nonlinearity::Sine, &p, &run.wave, &pts).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-8));
        for k in 1..=64i64 {
            assert!(run.wave.coeff(k).im.abs() < 1e-12);
        }
        let err = map_equivalence_error(&Nonlinearity::Sine, &p, &run.wave, 0.0, (t / 0.5) as usize + 1).unwrap();
        assert!(err < 1e-8, "{err}");
    }
}
