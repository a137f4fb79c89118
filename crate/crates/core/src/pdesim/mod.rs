//! Space-time leapfrog simulation of `u_tt = u_xx - V'(u)` on a periodic
//! grid, travelling-wave transport checks and the discrete multisymplectic
//! conservation law. Steady states live in [`steady`].

pub mod steady;

pub use steady::{
    classify_orbit, continuous_separatrices, saddle_orbits, spatial_step, steady_equilibria, steady_state_portrait, Equilibrium, OrbitClass, SpatialScheme,
    SteadyStateOrbit,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlin::Nonlinearity;
use crate::spectral::{FourierWave, WaveParams};

/// Two consecutive time levels `u^{n-1}`, `u^n` on a periodic grid.
#[derive(Debug, Clone, Serialize)]
pub struct GridField {
    pub dx: f64,
    pub dt: f64,
    /// Index `n` of the current level.
    pub step: usize,
    pub prev: Vec<f64>,
    pub curr: Vec<f64>,
}

impl GridField {
    pub fn new(dx: f64, dt: f64, prev: Vec<f64>, curr: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0 && dt > 0.0) {
            return Err(Error::InvalidParams("dx and dt must be positive".into()));
        }
        if prev.len() != curr.len() || curr.len() < 3 {
            return Err(Error::InvalidParams("levels need equal length >= 3".into()));
        }
        Ok(GridField { dx, dt, step: 1, prev, curr })
    }

    pub fn len(&self) -> usize {
        self.curr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curr.is_empty()
    }

    pub fn cfl(&self) -> f64 {
        self.dt / self.dx
    }

    /// `dt/dx >= 1` is outside the linear stability region of the stencil.
    pub fn cfl_flagged(&self) -> bool {
        self.cfl() >= 1.0
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# n={} dx={:.16e} dt={:.16e}\ni,u\n", self.step, self.dx, self.dt);
        for (i, u) in self.curr.iter().enumerate() {
            s += &format!("{},{:.16e}\n", i, u);
        }
        s
    }
}

fn lap(u: &[f64], i: usize) -> f64 {
    let m = u.len();
    u[(i + 1) % m] - 2.0 * u[i] + u[(i + m - 1) % m]
}

/// `u^{n+1} = 2u^n - u^{n-1} + (dt/dx)^2 (u_{i+1} - 2u_i + u_{i-1}) - dt^2 V'(u_i)`.
pub fn leapfrog_step(nl: &Nonlinearity, f: &GridField) -> Result<GridField> {
    let r2 = f.cfl().powi(2);
    let dt2 = f.dt * f.dt;
    let mut next = Vec::with_capacity(f.len());
    for i in 0..f.len() {
        next.push(2.0 * f.curr[i] - f.prev[i] + r2 * lap(&f.curr, i) - dt2 * nl.vprime(f.curr[i])?);
    }
    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("leapfrog blow-up at step {}", f.step + 1)));
    }
    Ok(GridField { dx: f.dx, dt: f.dt, step: f.step + 1, prev: f.curr.clone(), curr: next })
}

/// Largest stencil residual over the middle level of three.
pub fn stencil_residual(nl: &Nonlinearity, prev: &[f64], curr: &[f64], next: &[f64], dx: f64, dt: f64) -> Result<f64> {
    let mut r = 0.0f64;
    for i in 0..curr.len() {
        let v = (next[i] - 2.0 * curr[i] + prev[i]) / (dt * dt) - lap(curr, i) / (dx * dx) + nl.vprime(curr[i])?;
        r = r.max(v.abs());
    }
    Ok(r)
}

/// Grid samples `u_i^n = phi(i sigma - n kappa)`, `i = 0..m`.
pub fn wave_level(wave: &FourierWave, sigma: f64, kappa: f64, m: usize, n: i64) -> Vec<f64> {
    let xs: Vec<f64> = (0..m).map(|i| i as f64 * sigma - n as f64 * kappa).collect();
    wave.evaluate_many(&xs)
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportReport {
    pub steps: usize,
    pub grid_points: usize,
    pub dx: f64,
    pub dt: f64,
    pub cfl: f64,
    pub cfl_flagged: bool,
    /// Largest stencil residual of the sampled wave over the first step.
    pub initial_residual: f64,
    /// `max |u^steps - phi(i sigma - steps kappa)|`.
    pub max_deviation: f64,
}

/// Number of grid points per period, requiring the period to be an integer
/// multiple of `sigma`.
pub fn commensurate_points(period: f64, sigma: f64) -> Result<usize> {
    let m = (period / sigma).round();
    if m < 3.0 || (m * sigma - period).abs() > 1e-9 * period {
        return Err(Error::InvalidParams(format!("period {period} is not a multiple of sigma {sigma}")));
    }
    Ok(m as usize)
}

/// Starts the scheme from two exact wave levels and compares against the
/// translated wave after `steps` steps. `dx = sigma`, `dt = kappa / c`.
pub fn wave_transport_test(nl: &Nonlinearity, wave: &FourierWave, params: &WaveParams, steps: usize) -> Result<TransportReport> {
    transport_with_perturbation(nl, wave, params, steps, None)
}

/// As [`wave_transport_test`], with `noise` added to both initial levels.
pub fn transport_with_perturbation(nl: &Nonlinearity, wave: &FourierWave, params: &WaveParams, steps: usize, noise: Option<&[f64]>) -> Result<TransportReport> {
    if params.c <= 0.0 {
        return Err(Error::InvalidParams("transport needs c > 0".into()));
    }
    let m = commensurate_points(wave.period(), params.sigma)?;
    let (dx, dt) = (params.sigma, params.kappa / params.c);
    let mut l0 = wave_level(wave, params.sigma, params.kappa, m, 0);
    let mut l1 = wave_level(wave, params.sigma, params.kappa, m, 1);
    let l2 = wave_level(wave, params.sigma, params.kappa, m, 2);
    let initial_residual = stencil_residual(nl, &l0, &l1, &l2, dx, dt)?;
    if let Some(z) = noise {
        if z.len() != m {
            return Err(Error::InvalidParams(format!("noise length {} differs from grid size {m}", z.len())));
        }
        for i in 0..m {
            l0[i] += z[i];
            l1[i] += z[i];
        }
    }
    let mut f = GridField::new(dx, dt, l0, l1)?;
    for _ in 1..steps {
        f = leapfrog_step(nl, &f)?;
    }
    let target = wave_level(wave, params.sigma, params.kappa, m, steps as i64);
    let max_deviation = f.curr.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(TransportReport { steps, grid_points: m, dx, dt, cfl: dt / dx, cfl_flagged: dt / dx >= 1.0, initial_residual, max_deviation })
}

/// One step of the variational stencil about `field.curr`:
/// `dU^{n+1} = 2dU^n - dU^{n-1} + r^2 lap dU^n - dt^2 V''(u^n) dU^n`.
/// A nonzero `eps` adds `dt^2 eps (dU_{i+1} - dU_{i-1}) / (2 dx)`, a
/// stencil that is no longer variational.
pub fn tangent_step(nl: &Nonlinearity, field: &GridField, tangent: &GridField, eps: f64) -> Result<GridField> {
    if tangent.len() != field.len() {
        return Err(Error::InvalidParams("tangent and field sizes differ".into()));
    }
    let m = field.len();
    let r2 = field.cfl().powi(2);
    let dt2 = field.dt * field.dt;
    let t = &tangent.curr;
    let mut next = Vec::with_capacity(m);
    for i in 0..m {
        let skew = eps * (t[(i + 1) % m] - t[(i + m - 1) % m]) / (2.0 * field.dx);
        next.push(2.0 * t[i] - tangent.prev[i] + r2 * lap(t, i) - dt2 * nl.derivative(field.curr[i], 1)? * t[i] + dt2 * skew);
    }
    Ok(GridField { dx: field.dx, dt: field.dt, step: tangent.step + 1, prev: t.clone(), curr: next })
}

/// Residual of the discrete conservation law `D_t omega + D_x kappa = 0` at level `n`:
/// `omega^{n+1/2} = (B^n A^{n+1} - A^n B^{n+1}) / dt`,
/// `kappa_{i+1/2} = (B_i A_{i+1} - A_i B_{i+1}) / dx` (both at level `n`), and
/// residual `(omega^{n+1/2} - omega^{n-1/2}) / dt - (kappa_{i+1/2} - kappa_{i-1/2}) / dx`.
///
/// `a.0` holds levels `(n-1, n)` and `a.1` levels `(n, n+1)` of the first
/// tangent; likewise for `b`.
pub fn msc_residual(field: &GridField, a: (&GridField, &GridField), b: (&GridField, &GridField)) -> Result<Vec<f64>> {
    let m = field.len();
    for g in [a.0, a.1, b.0, b.1] {
        if g.len() != m {
            return Err(Error::InvalidParams("tangent and field sizes differ".into()));
        }
    }
    if a.0.curr != a.1.prev || b.0.curr != b.1.prev {
        return Err(Error::InvalidParams("tangents not evolved consistently".into()));
    }
    let (dx, dt) = (field.dx, field.dt);
    let (am, a0, ap) = (&a.0.prev, &a.0.curr, &a.1.curr);
    let (bm, b0, bp) = (&b.0.prev, &b.0.curr, &b.1.curr);
    let kap = |i: usize| (b0[i] * a0[(i + 1) % m] - a0[i] * b0[(i + 1) % m]) / dx;
    Ok((0..m)
        .map(|i| {
            let wp = (b0[i] * ap[i] - a0[i] * bp[i]) / dt;
            let wm = (bm[i] * a0[i] - am[i] * b0[i]) / dt;
            (wp - wm) / dt - (kap(i) - kap((i + m - 1) % m)) / dx
        })
        .collect())
}
