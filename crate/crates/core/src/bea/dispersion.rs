//! Fourier symbol of `D^2 L^-1` against its truncation.

use num_complex::Complex64;
use std::f64::consts::PI;
use serde::Serialize;

use super::ModifiedEquation;

/// `S(x) = 2 (1 - cos x) / x^2`.
fn s_full(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 12.0 + x.powi(4) / 360.0
    } else {
        2.0 * (1.0 - x.cos()) / (x * x)
    }
}

/// `S(x) - (1 - x^2/12 + x^4/360)`, accurate for small `x`.
fn s_tail(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // 2 sum_{k>=4} (-1)^{k+1} x^{2k-2} / (2k)!
        let x2 = x * x;
        let mut term = -2.0 * x2 * x2 * x2 / 40320.0;
        let mut sum = 0.0f64;
        let mut k = 4.0;
        while term.abs() > 1e-18 * sum.abs().max(1e-300) {
            sum += term;
            term *= -x2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            k += 1.0;
            if k > 40.0 {
                break;
            }
        }
        sum
    } else {
        s_full(x) - (1.0 - x * x / 12.0 + x.powi(4) / 360.0)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DispersionPair {
    /// `-s^2 (1 - mu2 s^2 + mu4 s^4)`
    pub truncated: f64,
    /// `-s^2 / G(s)`
    pub exact: f64,
    /// `exact - truncated`, evaluated without cancellation.
    pub difference: f64,
}

/// `G(s) = (c^2 S(k s) - S(s s)) / (c^2 - 1)` is the symbol of `L` divided
/// by `-s^2 (c^2 - 1)`; the symbol of `D^2 L^-1` is `-s^2 / G`.
pub fn dispersion_consistency(me: &ModifiedEquation, s: f64) -> DispersionPair {
    let (c2, k, sg) = (me.c * me.c, me.kappa, me.sigma);
    let a1 = c2 - 1.0;
    let g = (c2 * s_full(k * s) - s_full(sg * s)) / a1;
    let s2 = s * s;
    let t = 1.0 - me.mu2 * s2 + me.mu4 * s2 * s2;
    // G = 1 - a s^2 + b s^4 + Gr
    let a = (c2 * k * k - sg * sg) / (12.0 * a1);
    let b = (c2 * k.powi(4) - sg.powi(4)) / (360.0 * a1);
    let gr = (c2 * s_tail(k * s) - s_tail(sg * s)) / a1;
    // 1 - T G, expanded so that low orders cancel exactly
    let e2 = -me.mu2 - a;
    let e4 = b + me.mu2 * a + me.mu4;
    let e6 = -me.mu2 * b - me.mu4 * a;
    let e8 = me.mu4 * b;
    let tg_minus_1 = e2 * s2 + e4 * s2 * s2 + e6 * s2.powi(3) + e8 * s2.powi(4) + t * gr;
    DispersionPair { truncated: -s2 * t, exact: -s2 / g, difference: -s2 * (-tg_minus_1) / g }
}

/// Complex `S(x)`, by its series near the origin.
fn s_complex(x: Complex64) -> Complex64 {
    if x.norm() < 1.0 {
        let x2 = x * x;
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..30 {
            term *= -x2 / ((2 * k + 1) as f64 * (2 * k + 2) as f64);
            sum += term;
        }
        sum
    } else {
        2.0 * (1.0 - x.cos()) / (x * x)
    }
}

/// Taylor coefficients of `1/G(s) = 1 + m1 s^2 + m2 s^4 + ...` by the
/// trapezoidal Cauchy integral on a circle well inside the nearest zero of
/// `G`; returns `(-m1, m2)`, the values `mu2` and `mu4` should take.
pub fn series_fit(c: f64, sigma: f64, kappa: f64) -> (f64, f64) {
    let c2 = c * c;
    let r = 0.15 / sigma.max(kappa);
    let m = 64;
    let mut m1 = Complex64::new(0.0, 0.0);
    let mut m2 = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let th = 2.0 * PI * k as f64 / m as f64;
        let s = Complex64::from_polar(r, th);
        let g = (c2 * s_complex(kappa * s) - s_complex(sigma * s)) / (c2 - 1.0);
        let f = 1.0 / g;
        m1 += f * Complex64::from_polar(1.0, -2.0 * th);
        m2 += f * Complex64::from_polar(1.0, -4.0 * th);
    }
    let m1 = m1.re / (m as f64 * r * r);
    let m2 = m2.re / (m as f64 * r.powi(4));
    (-m1, m2)
}
