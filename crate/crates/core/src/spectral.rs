//! Truncated Fourier series on a `2 tau` periodic domain and FFT helpers.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretization parameters of a travelling wave: speed `c`, space step
/// `sigma`, scaled time step `kappa = c dt` and half-period `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub c: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub tau: f64,
}

impl WaveParams {
    pub fn new(c: f64, sigma: f64, kappa: f64, tau: f64) -> Result<Self> {
        let p = WaveParams { c, sigma, kappa, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, name: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name}={v} must be positive and finite")))
            }
        };
        if !self.c.is_finite() {
            return Err(Error::InvalidParams(format!("c={} is not finite", self.c)));
        }
        pos(self.sigma, "sigma")?;
        pos(self.kappa, "kappa")?;
        pos(self.tau, "tau")
    }

    /// The reduced ODE needs `c^2 != 1`.
    pub fn require_noncritical(&self) -> Result<()> {
        check_speed(self.c)
    }

    pub fn period(&self) -> f64 {
        2.0 * self.tau
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        WaveParams { tau, ..*self }
    }
}

pub(crate) fn check_speed(c: f64) -> Result<()> {
    if (c * c - 1.0).abs() < 1e-14 {
        Err(Error::InvalidParams(format!("c={c} gives c^2 = 1")))
    } else {
        Ok(())
    }
}

/// `phi(xi) = sum_{n=-N}^{N} coeffs[n] exp(i n pi xi / tau)`.
/// Storage is by signed index: `coeffs[n + N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierWave {
    pub tau: f64,
    coeffs: Vec<Complex64>,
}

impl FourierWave {
    pub fn zeros(tau: f64, n: usize) -> Self {
        FourierWave { tau, coeffs: vec![Complex64::new(0.0, 0.0); 2 * n + 1] }
    }

    pub fn from_coeffs(tau: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 || coeffs.len() < 3 {
            return Err(Error::InvalidParams(format!(
                "coefficient array length {} must be 2N+1 with N >= 1",
                coeffs.len()
            )));
        }
        Ok(FourierWave { tau, coeffs })
    }

    /// Real wave from nonnegative-index coefficients, filling `n < 0` by conjugation.
    pub fn from_half(tau: f64, half: &[Complex64]) -> Self {
        let n = half.len() - 1;
        let mut w = FourierWave::zeros(tau, n.max(1));
        for (k, &v) in half.iter().enumerate() {
            w.set_hermitian(k as i64, v);
        }
        w
    }

    pub fn n_max(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    pub fn period(&self) -> f64 {
        2.0 * self.tau
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        let big = self.n_max() as i64;
        if n.abs() > big {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + big) as usize]
        }
    }

    pub fn set(&mut self, n: i64, v: Complex64) {
        let big = self.n_max() as i64;
        self.coeffs[(n + big) as usize] = v;
    }

    /// Sets `n` and `-n` so that the wave stays real.
    pub fn set_hermitian(&mut self, n: i64, v: Complex64) {
        if n == 0 {
            self.set(0, Complex64::new(v.re, 0.0));
        } else {
            self.set(n, v);
            self.set(-n, v.conj());
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn hermitian_defect(&self) -> f64 {
        let big = self.n_max() as i64;
        (0..=big).fold(0.0f64, |m, n| m.max((self.coeff(-n) - self.coeff(n).conj()).norm()))
    }

    /// Complex value of the series at `xi`. Phases come from a rotation
    /// recurrence that is re-anchored every 256 terms.
    pub fn evaluate_complex(&self, xi: f64) -> Complex64 {
        let big = self.n_max() as i64;
        let theta = PI * xi / self.tau;
        let step = Complex64::from_polar(1.0, theta);
        let mut sum = self.coeff(0);
        let mut e = step;
        for n in 1..=big {
            if n % 256 == 0 {
                e = Complex64::from_polar(1.0, theta * n as f64);
            }
            sum += self.coeff(n) * e + self.coeff(-n) * e.conj();
            e *= step;
        }
        sum
    }

    /// Real value of the series, rejecting waves whose imaginary part is
    /// not negligible.
    pub fn evaluate(&self, xi: f64) -> Result<f64> {
        let z = self.evaluate_complex(xi);
        let tol = 1e-12 * self.max_abs();
        if z.im.abs() > tol {
            return Err(Error::Symmetry(z.im));
        }
        Ok(z.re)
    }

    /// Real part only, for waves known to be real.
    pub fn eval(&self, xi: f64) -> f64 {
        self.evaluate_complex(xi).re
    }

    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.par_iter().map(|&x| self.eval(x)).collect()
    }

    /// Coefficient-wise multiplication by `(i n pi / tau)^order`.
    pub fn spectral_derivative(&self, order: u32) -> FourierWave {
        let big = self.n_max() as i64;
        let mut out = self.clone();
        for n in -big..=big {
            let k = Complex64::new(0.0, n as f64 * PI / self.tau).powu(order);
            out.set(n, self.coeff(n) * k);
        }
        out
    }

    /// `xi -> phi(xi + shift)`.
    pub fn shifted(&self, shift: f64) -> FourierWave {
        let big = self.n_max() as i64;
        let mut out = self.clone();
        for n in -big..=big {
            out.set(n, self.coeff(n) * Complex64::from_polar(1.0, n as f64 * PI * shift / self.tau));
        }
        out
    }

    /// Same wave with truncation `n` (zero padded or cut).
    pub fn resized(&self, n: usize) -> FourierWave {
        let mut out = FourierWave::zeros(self.tau, n);
        let m = n.min(self.n_max()) as i64;
        for k in -m..=m {
            out.set(k, self.coeff(k));
        }
        out
    }

    /// Coefficients from `m` uniform samples on `[0, 2 tau)`. For even `m`
    /// the Nyquist coefficient is split between `n = +-m/2`.
    pub fn from_samples(tau: f64, values: &[f64]) -> FourierWave {
        let m = values.len();
        let spec = dft(values);
        let scale = 1.0 / m as f64;
        let big = m / 2;
        let mut w = FourierWave::zeros(tau, big.max(1));
        for k in 0..m {
            let n = if k <= (m - 1) / 2 { k as i64 } else { k as i64 - m as i64 };
            w.set(n, spec[k] * scale);
        }
        if m % 2 == 0 {
            let half = spec[big] * (0.5 * scale);
            w.set(big as i64, half);
            w.set(-(big as i64), half);
        }
        w
    }

    /// Values on `m` uniform points of `[0, 2 tau)`. Modes beyond `m/2` are
    /// aliased onto the grid.
    pub fn samples(&self, m: usize) -> Vec<f64> {
        let big = self.n_max() as i64;
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        for n in -big..=big {
            spec[n.rem_euclid(m as i64) as usize] += self.coeff(n);
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(m).process(&mut spec);
        spec.into_iter().map(|z| z.re).collect()
    }

    /// CSV with a comment header recording `tau` and `N`.
    pub fn to_csv(&self) -> String {
        let big = self.n_max() as i64;
        let mut s = String::new();
        let _ = writeln!(s, "# tau={:.16e} N={}", self.tau, big);
        s.push_str("n,re,im\n");
        for n in -big..=big {
            let c = self.coeff(n);
            let _ = writeln!(s, "{},{:.16e},{:.16e}", n, c.re, c.im);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<FourierWave> {
        let bad = |m: &str| Error::InvalidParams(format!("coefficient CSV: {m}"));
        let mut tau = None;
        let mut big = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(h) = line.strip_prefix('#') {
                for tok in h.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("tau=") {
                        tau = v.parse::<f64>().ok();
                    } else if let Some(v) = tok.strip_prefix("N=") {
                        big = v.parse::<usize>().ok();
                    }
                }
                continue;
            }
            if line.is_empty() || line.starts_with("n,") {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(bad("expected 3 columns"));
            }
            let n: i64 = f[0].parse().map_err(|_| bad("index"))?;
            let re: f64 = f[1].parse().map_err(|_| bad("real part"))?;
            let im: f64 = f[2].parse().map_err(|_| bad("imaginary part"))?;
            rows.push((n, Complex64::new(re, im)));
        }
        let tau = tau.ok_or_else(|| bad("missing tau"))?;
        let big = big.ok_or_else(|| bad("missing N"))?;
        let mut w = FourierWave::zeros(tau, big);
        for (n, c) in rows {
            if n.unsigned_abs() as usize > big {
                return Err(bad("index beyond N"));
            }
            w.set(n, c);
        }
        Ok(w)
    }
}

/// `X_k = sum_j x_j exp(-2 pi i j k / M)`.
pub fn dft(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    if buf.is_empty() {
        return buf;
    }
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Complex forward transform.
pub fn dft_complex(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    if !buf.is_empty() {
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    }
    buf
}

/// Normalized inverse of [`dft`].
pub fn idft(spec: &[Complex64]) -> Vec<Complex64> {
    let mut buf = spec.to_vec();
    if buf.is_empty() {
        return buf;
    }
    let m = buf.len();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let s = 1.0 / m as f64;
    buf.iter_mut().for_each(|z| *z *= s);
    buf
}

/// Signed frequency of wrapped index `k` in a length-`m` transform.
pub fn signed_index(k: usize, m: usize) -> i64 {
    if k <= m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

/// Uniform grid `xi_j = j * 2 tau / m`.
pub fn uniform_grid(tau: f64, m: usize) -> Vec<f64> {
    (0..m).map(|j| j as f64 * 2.0 * tau / m as f64).collect()
}

/// Two-column sampled profile CSV.
pub fn profile_csv(xs: &[f64], ys: &[f64], header: &str) -> String {
    let mut s = String::with_capacity(xs.len() * 48);
    s.push_str(header);
    s.push('\n');
    for (x, y) in xs.iter().zip(ys) {
        let _ = writeln!(s, "{:.16e},{:.16e}", x, y);
    }
    s
}
