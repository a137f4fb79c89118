//! Denominator spectrum `d_n` and the characteristic functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::WaveParams;

/// `d_n = (2c^2/k^2)(cos(n pi k/tau) - 1) - (2/s^2)(cos(n pi s/tau) - 1)`.
/// Takes `n` as a float so that very large indices stay exact.
#[inline]
pub fn denominator(p: &WaveParams, n: f64) -> f64 {
    let n = n.abs();
    let (c, s, k) = (p.c, p.sigma, p.kappa);
    2.0 * c * c / (k * k) * ((n * PI * k / p.tau).cos() - 1.0) - 2.0 / (s * s) * ((n * PI * s / p.tau).cos() - 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct DenominatorSpectrum {
    pub params: WaveParams,
    values: Vec<f64>,
}

impl DenominatorSpectrum {
    pub fn new(params: WaveParams, n_max: usize) -> Self {
        let half: Vec<f64> = (0..=n_max).map(|n| denominator(&params, n as f64)).collect();
        let values = half.iter().rev().chain(half.iter().skip(1)).copied().collect();
        DenominatorSpectrum { params, values }
    }

    pub fn n_max(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    pub fn get(&self, n: i64) -> f64 {
        self.values[(n + self.n_max() as i64) as usize]
    }

    /// Values in FFT (wrapped) order for a transform of even length `m = 2 n_max`.
    pub fn wrapped(&self, m: usize) -> Vec<f64> {
        (0..m).map(|k| denominator(&self.params, crate::spectral::signed_index(k, m) as f64)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CharacteristicFunction {
    Continuous { c: f64 },
    Discrete { c: f64, sigma: f64, kappa: f64 },
}

impl CharacteristicFunction {
    pub fn discrete(p: &WaveParams) -> Self {
        CharacteristicFunction::Discrete { c: p.c, sigma: p.sigma, kappa: p.kappa }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.eval_complex(Complex64::new(s, 0.0)).re
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        match *self {
            CharacteristicFunction::Continuous { c } => 1.0 - c * c * s * s + s * s,
            CharacteristicFunction::Discrete { c, sigma, kappa } => {
                let one = Complex64::new(1.0, 0.0);
                one - 2.0 * c * c / (kappa * kappa) * (one - (s * kappa).cos())
                    + 2.0 / (sigma * sigma) * (one - (s * sigma).cos())
            }
        }
    }
}

fn check_subluminal(c: f64, kappa: f64) -> Result<()> {
    if !(c.abs() < 1.0) || !(kappa > 0.0) {
        return Err(Error::InvalidParams(format!("zeros need |c| < 1 and kappa > 0 (c={c}, kappa={kappa})")));
    }
    Ok(())
}

/// Zeros of `R_Disc` for `sigma = kappa`, ordered by `|Re|` (all share the
/// same `|Im|`). Every pair `s, -s` is emitted together.
pub fn rdisc_zeros_sigma_eq_kappa(c: f64, kappa: f64, count: usize) -> Result<Vec<Complex64>> {
    check_subluminal(c, kappa)?;
    let x = 1.0 + kappa * kappa / (2.0 * (1.0 - c * c));
    let a = x.acosh();
    let mut out = Vec::with_capacity(count);
    let mut n = 0i64;
    while out.len() < count {
        let base = Complex64::new(2.0 * PI * n as f64, a) / kappa;
        if n == 0 {
            out.push(base);
            out.push(-base);
        } else {
            out.push(base);
            out.push(-base);
            out.push(base.conj());
            out.push(-base.conj());
        }
        n += 1;
    }
    out.truncate(count);
    Ok(out)
}

/// The four fundamental zeros of `R_Disc` for `sigma = 2 kappa`: a real
/// pair and a purely imaginary pair.
pub fn rdisc_zeros_sigma_eq_2kappa(c: f64, kappa: f64) -> Result<Vec<Complex64>> {
    check_subluminal(c, kappa)?;
    // kappa^2 + (1-x)(1+x-2c^2) = 0 in x = cos(kappa s)
    let c2 = c * c;
    let root = ((1.0 - c2).powi(2) + kappa * kappa).sqrt();
    let x_plus = c2 + root;
    let x_minus = c2 - root;
    if !(x_plus > 1.0) || !(x_minus > -1.0 && x_minus < 1.0) {
        return Err(Error::RootStructure(format!(
            "cos(kappa s) roots {x_minus}, {x_plus} do not give two real and two imaginary zeros (needs kappa < 2|c|)"
        )));
    }
    let r = x_minus.acos() / kappa;
    let i = x_plus.acosh() / kappa;
    Ok(vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0), Complex64::new(0.0, i), Complex64::new(0.0, -i)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rdisc_and_dn_agree() {
        let p = WaveParams::new(0.5, 0.4, 0.2, 30.0).unwrap();
        let r = CharacteristicFunction::discrete(&p);
        for n in 0..50 {
            let s = n as f64 * PI / p.tau;
            assert!((1.0 + denominator(&p, n as f64) - r.eval(s)).abs() < 1e-12);
        }
        assert_eq!(r.eval(0.0), 1.0);
        assert_eq!(CharacteristicFunction::Continuous { c: 0.3 }.eval(0.0), 1.0);
    }

    #[test]
    fn sigma_eq_kappa_zeros() {
        let (c, kappa) = (0.5, 0.3);
        let z = rdisc_zeros_sigma_eq_kappa(c, kappa, 10).unwrap();
        let r = CharacteristicFunction::Discrete { c, sigma: kappa, kappa };
        for s in &z {
            assert!(r.eval_complex(*s).norm() < 1e-10, "{s}");
            assert!(z.iter().any(|t| (t + s).norm() < 1e-12));
        }
        // continuum limit of the principal zero
        let z0 = rdisc_zeros_sigma_eq_kappa(c, 1e-3, 1).unwrap()[0];
        let s1 = 1.0 / (1.0 - c * c).sqrt();
        assert!(z0.re.abs() < 1e-12 && ((z0.im - s1) / s1).abs() < 1e-4);
    }

    #[test]
    fn sigma_eq_2kappa_zeros() {
        let (c, kappa) = (0.5, 0.1);
        let z = rdisc_zeros_sigma_eq_2kappa(c, kappa).unwrap();
        let r = CharacteristicFunction::Discrete { c, sigma: 2.0 * kappa, kappa };
        for s in &z {
            assert!(r.eval_complex(*s).norm() < 1e-10);
            assert!(z.iter().any(|t| (t + s).norm() < 1e-14));
            assert!(z.iter().any(|t| (t - s.conj()).norm() < 1e-14));
        }
        assert!(z.iter().filter(|s| s.im == 0.0).count() == 2);
        assert!(rdisc_zeros_sigma_eq_2kappa(0.5, 1.2).is_err());
        assert!(rdisc_zeros_sigma_eq_2kappa(1.5, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn dn_even_and_zero_at_origin(c in -2.0f64..2.0, s in 0.01f64..2.0, k in 0.01f64..2.0, tau in 0.5f64..50.0, n in 0i64..100_000) {
            let p = WaveParams::new(c, s, k, tau).unwrap();
            prop_assert_eq!(denominator(&p, 0.0), 0.0);
            prop_assert_eq!(denominator(&p, n as f64), denominator(&p, -(n as f64)));
            let spec = DenominatorSpectrum::new(p, 20);
            prop_assert_eq!(spec.get(0), 0.0);
            for m in 1..=20 {
                prop_assert_eq!(spec.get(m), spec.get(-m));
            }
        }

        #[test]
        fn zeros_verified(c in -0.95f64..0.95, kappa in 0.01f64..1.0) {
            let r = CharacteristicFunction::Discrete { c, sigma: kappa, kappa };
            for s in rdisc_zeros_sigma_eq_kappa(c, kappa, 6).unwrap() {
                prop_assert!(r.eval_complex(s).norm() < 1e-10);
            }
            prop_assume!(kappa < 2.0 * c.abs());
            let r2 = CharacteristicFunction::Discrete { c, sigma: 2.0 * kappa, kappa };
            for s in rdisc_zeros_sigma_eq_2kappa(c, kappa).unwrap() {
                prop_assert!(r2.eval_complex(s).norm() < 1e-10);
            }
        }
    }
}
