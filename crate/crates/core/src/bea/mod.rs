//! Backward error analysis of the travelling-wave equation: the modified
//! second-order ODE `y'' = f + f3 + f5`, its Hamiltonian form and studies
//! comparing truncations against discrete waves.

pub mod dispersion;
pub mod hamiltonian;
pub mod studies;

pub use dispersion::{dispersion_consistency, DispersionPair};
pub use hamiltonian::ModifiedHamiltonianSystem;
pub use studies::{contour_anomalies, contour_sweep, error_ladder, integrate_modified, resonance_comparison, ContourResult, LadderResult};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlin::Nonlinearity;
use crate::spectral::check_speed;

/// Truncation level of the modified equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Order {
    /// `y'' = f`
    O2,
    /// `y'' = f + f3`
    O4,
    /// `y'' = f + f3 + f5`
    O6,
}

/// `mu2 = (s^2 - c^2 k^2) / (12 (c^2 - 1))`.
pub fn mu2(c: f64, sigma: f64, kappa: f64) -> f64 {
    (sigma * sigma - c * c * kappa * kappa) / (12.0 * (c * c - 1.0))
}

/// `mu4 = (3 c^4 k^4 + 3 s^4 + 2 c^2 (k^4 - 5 k^2 s^2 + s^4)) / (720 (c^2 - 1)^2)`.
pub fn mu4(c: f64, sigma: f64, kappa: f64) -> f64 {
    let (c2, k2, s2) = (c * c, kappa * kappa, sigma * sigma);
    (3.0 * c2 * c2 * k2 * k2 + 3.0 * s2 * s2 + 2.0 * c2 * (k2 * k2 - 5.0 * k2 * s2 + s2 * s2)) / (720.0 * (c2 - 1.0).powi(2))
}

#[derive(Debug, Clone)]
pub struct ModifiedEquation {
    pub c: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub nl: Nonlinearity,
    pub order: Order,
    pub mu2: f64,
    pub mu4: f64,
}

impl ModifiedEquation {
    pub fn new(nl: &Nonlinearity, c: f64, sigma: f64, kappa: f64, order: Order) -> Result<Self> {
        check_speed(c)?;
        if !nl.is_smooth() {
            return Err(Error::NotSmooth("modified equation"));
        }
        Ok(ModifiedEquation { c, sigma, kappa, nl: nl.clone(), order, mu2: mu2(c, sigma, kappa), mu4: mu4(c, sigma, kappa) })
    }

    pub fn with_order(&self, order: Order) -> Self {
        ModifiedEquation { order, ..self.clone() }
    }

    /// `[f, f', f'', f''', f'''']` with `f = -V'/(c^2 - 1)`.
    pub fn f_derivs(&self, y: f64) -> Result<[f64; 5]> {
        let a = self.c * self.c - 1.0;
        let v = self.nl.derivatives(y)?;
        Ok([-v[0] / a, -v[1] / a, -v[2] / a, -v[3] / a, -v[4] / a])
    }

    /// `f3 = mu2 (f'' v^2 + f' f)`.
    pub fn f3(&self, y: f64, v: f64) -> Result<f64> {
        let f = self.f_derivs(y)?;
        Ok(f3_of(&f, self.mu2, v))
    }

    /// `f5 = mu2 f' f3 + mu4 (f'^2 f + 3 f'' f^2 + 5 f' f'' v^2 + 6 f''' f v^2 + f'''' v^4)`.
    pub fn f5(&self, y: f64, v: f64) -> Result<f64> {
        let f = self.f_derivs(y)?;
        Ok(f5_of(&f, self.mu2, self.mu4, v))
    }

    /// `y''` at the configured truncation.
    pub fn field(&self, y: f64, v: f64) -> Result<f64> {
        let f = self.f_derivs(y)?;
        let mut r = f[0];
        if self.order >= Order::O4 {
            r += f3_of(&f, self.mu2, v);
        }
        if self.order >= Order::O6 {
            r += f5_of(&f, self.mu2, self.mu4, v);
        }
        Ok(r)
    }
}

fn f3_of(f: &[f64; 5], mu2: f64, v: f64) -> f64 {
    mu2 * (f[2] * v * v + f[1] * f[0])
}

fn f5_of(f: &[f64; 5], mu2: f64, mu4: f64, v: f64) -> f64 {
    let v2 = v * v;
    mu2 * f[1] * f3_of(f, mu2, v)
        + mu4 * (f[1] * f[1] * f[0] + 3.0 * f[2] * f[0] * f[0] + 5.0 * f[1] * f[2] * v2 + 6.0 * f[3] * f[0] * v2 + f[4] * v2 * v2)
}

/// Free-function form of [`ModifiedEquation::field`].
pub fn modified_field(me: &ModifiedEquation, y: f64, ydot: f64) -> Result<f64> {
    me.field(y, ydot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlin::SmoothPotential;
    use proptest::prelude::*;
    use std::sync::Arc;

    struct Linear(f64);
    impl SmoothPotential for Linear {
        fn potential(&self, u: f64) -> f64 {
            0.5 * self.0 * u * u
        }
        fn derivative(&self, u: f64, order: usize) -> f64 {
            match order {
                0 => self.0 * u,
                1 => self.0,
                _ => 0.0,
            }
        }
    }

    #[test]
    fn linear_force() {
        let (c, s, k) = (1.3, 0.4, 0.3);
        let nl = Nonlinearity::CustomSmooth(Arc::new(Linear(2.0)));
        let me = ModifiedEquation::new(&nl, c, s, k, Order::O6).unwrap();
        let lam = -2.0 / (c * c - 1.0);
        let y = 0.7;
        assert!((me.f3(y, 0.4).unwrap() - me.mu2 * lam * lam * y).abs() < 1e-14);
        assert!((me.f5(y, 0.4).unwrap() - (me.mu2 * me.mu2 + me.mu4) * lam.powi(3) * y).abs() < 1e-13);
    }

    #[test]
    fn mu2_vanishes_on_the_line() {
        let c = 1.3;
        let k = 0.5;
        let me = ModifiedEquation::new(&Nonlinearity::Sine, c, c * k, k, Order::O4).unwrap();
        assert!(me.mu2.abs() < 1e-16);
        let o2 = me.with_order(Order::O2);
        assert!((me.field(0.4, 0.2).unwrap() - o2.field(0.4, 0.2).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn origin_is_rest_point() {
        for o in [Order::O2, Order::O4, Order::O6] {
            let me = ModifiedEquation::new(&Nonlinearity::Sine, 1.3, 0.5, 0.5, o).unwrap();
            assert_eq!(me.field(0.0, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ModifiedEquation::new(&Nonlinearity::Sine, 1.0, 0.5, 0.5, Order::O4).is_err());
        assert!(ModifiedEquation::new(&Nonlinearity::Sawtooth, 1.3, 0.5, 0.5, Order::O4).is_err());
    }

    #[test]
    fn leapfrog_limit_values() {
        // sigma = kappa = h: mu2 = -h^2/12, mu4 = h^4/240
        let h = 0.3;
        for c in [0.0, 0.5, 1.3] {
            assert!((mu2(c, h, h) + h * h / 12.0).abs() < 1e-15);
            assert!((mu4(c, h, h) - h.powi(4) / 240.0).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn coefficients_match_series_fit(c in 0.0f64..2.5, s in 0.1f64..1.0, k in 0.1f64..1.0) {
            prop_assume!((c * c - 1.0).abs() > 0.05);
            let (a, b) = dispersion::series_fit(c, s, k);
            prop_assert!((a - mu2(c, s, k)).abs() <= 1e-10 * (1.0 + mu2(c, s, k).abs()));
            prop_assert!((b - mu4(c, s, k)).abs() <= 1e-8 * (1.0 + mu4(c, s, k).abs()));
        }
    }
}
