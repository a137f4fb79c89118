//! Potential families `V` and their derivatives.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A user supplied smooth potential. `derivative(u, k)` returns the k-th
/// derivative of `V'` (so `k = 0` is `V'` itself), for `k` in `0..=4`.
pub trait SmoothPotential: Send + Sync {
    fn potential(&self, u: f64) -> f64;
    fn derivative(&self, u: f64, order: usize) -> f64;
    fn name(&self) -> &str {
        "custom"
    }
}

#[derive(Clone)]
pub enum Nonlinearity {
    /// `V'(u) = u - h(u - a)` with a right-continuous Heaviside step.
    McKean { a: f64 },
    /// Continuous piecewise-linear force on `(-2, 2)`.
    Sawtooth,
    /// `V'(u) = sin u`.
    Sine,
    /// `-V'(u) = sin u + (2/5) cos 2u`.
    AppendixForce,
    CustomSmooth(Arc<dyn SmoothPotential>),
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nonlinearity::McKean { a } => write!(f, "McKean(a={a})"),
            Nonlinearity::Sawtooth => write!(f, "Sawtooth"),
            Nonlinearity::Sine => write!(f, "Sine"),
            Nonlinearity::AppendixForce => write!(f, "AppendixForce"),
            Nonlinearity::CustomSmooth(p) => write!(f, "CustomSmooth({})", p.name()),
        }
    }
}

/// Right-continuous Heaviside step, `h(0) = 1`.
#[inline]
pub fn heaviside(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

impl Nonlinearity {
    pub fn mckean(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParams(format!("McKean threshold a={a} must lie in (0,1)")));
        }
        Ok(Nonlinearity::McKean { a })
    }

    pub fn name(&self) -> String {
        match self {
            Nonlinearity::McKean { .. } => "mckean".into(),
            Nonlinearity::Sawtooth => "sawtooth".into(),
            Nonlinearity::Sine => "sine".into(),
            Nonlinearity::AppendixForce => "appendix".into(),
            Nonlinearity::CustomSmooth(p) => p.name().to_string(),
        }
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self, Nonlinearity::McKean { .. } | Nonlinearity::Sawtooth)
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        if let Nonlinearity::Sawtooth = self {
            if !(u > -2.0 && u < 2.0) {
                return Err(Error::Domain { value: u, domain: "(-2, 2)" });
            }
        }
        if !u.is_finite() {
            return Err(Error::NonFinite(format!("argument {u}")));
        }
        Ok(())
    }

    /// `V'(u)`.
    pub fn vprime(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        Ok(match self {
            Nonlinearity::McKean { a } => u - heaviside(u - a),
            Nonlinearity::Sawtooth => {
                if u <= -1.0 {
                    u + 2.0
                } else if u < 1.0 {
                    -u
                } else {
                    u - 2.0
                }
            }
            Nonlinearity::Sine => u.sin(),
            Nonlinearity::AppendixForce => -u.sin() - 0.4 * (2.0 * u).cos(),
            Nonlinearity::CustomSmooth(p) => p.derivative(u, 0),
        })
    }

    /// The force `-V'(u)`.
    pub fn force(&self, u: f64) -> Result<f64> {
        self.vprime(u).map(|v| -v)
    }

    /// `d^order V' / du^order` for smooth kinds, `order` in `1..=4`.
    /// Order 0 is accepted as well and returns `V'`.
    pub fn derivative(&self, u: f64, order: usize) -> Result<f64> {
        if order > 4 {
            return Err(Error::InvalidParams(format!("derivative order {order} > 4")));
        }
        match self {
            Nonlinearity::McKean { .. } => Err(Error::NotSmooth("McKean")),
            Nonlinearity::Sawtooth => Err(Error::NotSmooth("Sawtooth")),
            Nonlinearity::Sine => Ok(match order % 4 {
                0 => u.sin(),
                1 => u.cos(),
                2 => -u.sin(),
                _ => -u.cos(),
            }),
            Nonlinearity::AppendixForce => {
                // V' = -sin u - 0.4 cos 2u
                let s = -match order % 4 {
                    0 => u.sin(),
                    1 => u.cos(),
                    2 => -u.sin(),
                    _ => -u.cos(),
                };
                let t = 2.0 * u;
                let c = -0.4
                    * 2f64.powi(order as i32)
                    * match order % 4 {
                        0 => t.cos(),
                        1 => -t.sin(),
                        2 => -t.cos(),
                        _ => t.sin(),
                    };
                Ok(s + c)
            }
            Nonlinearity::CustomSmooth(p) => Ok(p.derivative(u, order)),
        }
    }

    /// All of `V', V'', ..., V^(5)` at once (smooth kinds only).
    pub fn derivatives(&self, u: f64) -> Result<[f64; 5]> {
        let mut out = [0.0; 5];
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.derivative(u, k)?;
        }
        Ok(out)
    }

    /// Potential normalized so that `V(0) = 0`.
    pub fn potential(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        Ok(match self {
            Nonlinearity::McKean { a } => 0.5 * u * u - (u - a).max(0.0),
            Nonlinearity::Sawtooth => {
                if u.abs() < 1.0 {
                    -0.5 * u * u
                } else {
                    0.5 * (u.abs() - 2.0).powi(2) - 1.0
                }
            }
            Nonlinearity::Sine => 1.0 - u.cos(),
            Nonlinearity::AppendixForce => u.cos() - 0.2 * (2.0 * u).sin() - 1.0,
            Nonlinearity::CustomSmooth(p) => p.potential(u) - p.potential(0.0),
        })
    }
}

/// Convenience form of the force `-V'(u)`.
pub fn eval_force(nl: &Nonlinearity, u: f64) -> Result<f64> {
    nl.force(u)
}

/// Convenience form of `d^order V'/du^order`.
pub fn eval_derivatives(nl: &Nonlinearity, u: f64, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidParams("derivative order must be in 1..=4".into()));
    }
    nl.derivative(u, order)
}
