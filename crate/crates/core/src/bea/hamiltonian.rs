//! Modified Hamiltonian `H~ = H + H3 + H5` with `H = p^2/2 - F(y)`, `F' = f`,
//! and scalar structure `K~ = 1 + K3 + K5`. The flow is
//! `y' = K~ dH~/dp`, `p' = -K~ dH~/dy`.
//!
//! `K5 = 3 (mu2^2 + mu4) f'^2 + 4 mu4 f f'' + 4 mu4 p^2 f'''` makes `y' = p`
//! hold through fourth order, and `y''` then agrees with `f + f3 + f5`
//! through fifth order.

use super::{ModifiedEquation, Order};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct ModifiedHamiltonianSystem {
    pub me: ModifiedEquation,
    /// Include `H5` and `K5` (the sixth-order system) or only `H3`, `K3`.
    pub fifth: bool,
}

impl ModifiedHamiltonianSystem {
    pub fn new(me: &ModifiedEquation) -> Self {
        ModifiedHamiltonianSystem { me: me.clone(), fifth: me.order >= Order::O6 }
    }

    fn coeffs(&self) -> (f64, f64, f64) {
        let m2 = self.me.mu2;
        let m4 = if self.fifth { self.me.mu4 } else { 0.0 };
        let m22 = if self.fifth { m2 * m2 } else { 0.0 };
        (m2, m4, m22)
    }

    pub fn h3(&self, y: f64, p: f64) -> Result<f64> {
        let f = self.me.f_derivs(y)?;
        let m2 = self.me.mu2;
        Ok(0.5 * m2 * f[0] * f[0] - m2 * f[1] * p * p)
    }

    pub fn h5(&self, y: f64, p: f64) -> Result<f64> {
        let f = self.me.f_derivs(y)?;
        let (m2, m4) = (self.me.mu2, self.me.mu4);
        let p2 = p * p;
        Ok(m4 * f[0] * f[0] * f[1] + 0.5 * (m2 * m2 - 3.0 * m4) * f[1] * f[1] * p2 - 2.0 * m4 * f[0] * f[2] * p2 - m4 * p2 * p2 * f[3])
    }

    pub fn k3(&self, y: f64) -> Result<f64> {
        Ok(2.0 * self.me.mu2 * self.me.f_derivs(y)?[1])
    }

    pub fn k5(&self, y: f64, p: f64) -> Result<f64> {
        let f = self.me.f_derivs(y)?;
        let (m2, m4) = (self.me.mu2, self.me.mu4);
        Ok(3.0 * (m2 * m2 + m4) * f[1] * f[1] + 4.0 * m4 * f[0] * f[2] + 4.0 * m4 * p * p * f[3])
    }

    /// `H` without the corrections needs the potential: `H = p^2/2 + V/(c^2-1)`.
    pub fn h(&self, y: f64, p: f64) -> Result<f64> {
        let a = self.me.c * self.me.c - 1.0;
        Ok(0.5 * p * p + self.me.nl.potential(y)? / a)
    }

    pub fn modified_energy(&self, y: f64, p: f64) -> Result<f64> {
        let mut e = self.h(y, p)? + self.h3(y, p)?;
        if self.fifth {
            e += self.h5(y, p)?;
        }
        Ok(e)
    }

    /// `(y', p', y'')` of the first-order system at `(y, p)`.
    pub fn flow(&self, y: f64, p: f64) -> Result<(f64, f64, f64)> {
        let f = self.me.f_derivs(y)?;
        let (m2, m4, m22) = self.coeffs();
        let p2 = p * p;
        let hp = p - 2.0 * m2 * f[1] * p + (m22 - 3.0 * m4) * f[1] * f[1] * p - 4.0 * m4 * f[0] * f[2] * p - 4.0 * m4 * p2 * p * f[3];
        let hy = -f[0] + m2 * f[0] * f[1] - m2 * f[2] * p2
            + m4 * (2.0 * f[0] * f[1] * f[1] + f[0] * f[0] * f[2])
            + (m22 - 3.0 * m4) * f[1] * f[2] * p2
            - 2.0 * m4 * (f[1] * f[2] + f[0] * f[3]) * p2
            - m4 * p2 * p2 * f[4];
        let k = 1.0 + 2.0 * m2 * f[1] + (3.0 * m22 + 3.0 * m4) * f[1] * f[1] + 4.0 * m4 * f[0] * f[2] + 4.0 * m4 * p2 * f[3];
        let ky = 2.0 * m2 * f[2] + 2.0 * (3.0 * m22 + 3.0 * m4) * f[1] * f[2] + 4.0 * m4 * (f[1] * f[2] + f[0] * f[3]) + 4.0 * m4 * p2 * f[4];
        let kp = 8.0 * m4 * p * f[3];
        let hpp = 1.0 - 2.0 * m2 * f[1] + (m22 - 3.0 * m4) * f[1] * f[1] - 4.0 * m4 * f[0] * f[2] - 12.0 * m4 * p2 * f[3];
        let hpy = -2.0 * m2 * f[2] * p + 2.0 * (m22 - 3.0 * m4) * f[1] * f[2] * p - 4.0 * m4 * (f[1] * f[2] + f[0] * f[3]) * p - 4.0 * m4 * p2 * p * f[4];
        let ydot = k * hp;
        let pdot = -k * hy;
        let yddot = (ky * hp + k * hpy) * ydot + (kp * hp + k * hpp) * pdot;
        Ok((ydot, pdot, yddot))
    }

    /// Mismatch between the first-order system and the second-order field
    /// at `(y, p)`: `max(|y' - p|, |y'' - field(y, y')|)`.
    pub fn field_mismatch(&self, y: f64, p: f64) -> Result<f64> {
        let (yd, _, ydd) = self.flow(y, p)?;
        let fld = self.me.field(y, yd)?;
        Ok((yd - p).abs().max((ydd - fld).abs()))
    }
}
