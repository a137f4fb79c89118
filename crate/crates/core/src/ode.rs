//! ODE integrators: an 8th-order symmetric composition of Stormer-Verlet
//! for `y'' = f(y)` and an adaptive Gragg-Bulirsch-Stoer extrapolation
//! integrator for general first-order systems.

use crate::error::{Error, Result};

/// Substep weights of the triple-jump composition raising Verlet from
/// order 2 to order 8 (27 stages).
pub fn triple_jump_weights() -> Vec<f64> {
    let mut w = vec![1.0];
    for p in [2.0f64, 4.0, 6.0] {
        let r = 2f64.powf(1.0 / (p + 1.0));
        let g1 = 1.0 / (2.0 - r);
        let g2 = -r / (2.0 - r);
        let mut next = Vec::with_capacity(w.len() * 3);
        for g in [g1, g2, g1] {
            next.extend(w.iter().map(|x| x * g));
        }
        w = next;
    }
    w
}

/// One composed Stormer-Verlet step (kick-drift-kick) of size `h`.
pub fn composition_step<F: Fn(f64) -> f64>(f: &F, weights: &[f64], y: f64, v: f64, h: f64) -> (f64, f64) {
    let (mut y, mut v) = (y, v);
    for &w in weights {
        let dt = w * h;
        v += 0.5 * dt * f(y);
        y += dt * v;
        v += 0.5 * dt * f(y);
    }
    (y, v)
}

/// A first-order system `z' = g(t, z)`.
pub trait System {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, z: &[f64], out: &mut [f64]);
}

impl<F: Fn(f64, &[f64], &mut [f64])> System for (usize, F) {
    fn dim(&self) -> usize {
        self.0
    }
    fn rhs(&self, t: f64, z: &[f64], out: &mut [f64]) {
        (self.1)(t, z, out)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GbsOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_init: f64,
}

impl Default for GbsOptions {
    fn default() -> Self {
        GbsOptions { rtol: 1e-12, atol: 1e-12, max_steps: 1_000_000, h_init: 1e-2 }
    }
}

const KMAX: usize = 10;

/// Modified midpoint with `n` substeps over `[t, t + h]`.
fn midpoint<S: System>(sys: &S, t: f64, z: &[f64], dz0: &[f64], h: f64, n: usize, out: &mut [f64]) {
    let d = z.len();
    let hs = h / n as f64;
    let mut zm: Vec<f64> = z.to_vec();
    let mut zn: Vec<f64> = (0..d).map(|i| z[i] + hs * dz0[i]).collect();
    let mut g = vec![0.0; d];
    for k in 1..n {
        sys.rhs(t + k as f64 * hs, &zn, &mut g);
        for i in 0..d {
            let nxt = zm[i] + 2.0 * hs * g[i];
            zm[i] = zn[i];
            zn[i] = nxt;
        }
    }
    sys.rhs(t + h, &zn, &mut g);
    for i in 0..d {
        out[i] = 0.5 * (zm[i] + zn[i] + hs * g[i]);
    }
}

/// One extrapolated step; returns the new state and an error norm.
fn gbs_step<S: System>(sys: &S, t: f64, z: &[f64], h: f64, opt: &GbsOptions) -> (Vec<f64>, f64) {
    let d = z.len();
    let mut dz0 = vec![0.0; d];
    sys.rhs(t, z, &mut dz0);
    let seq: Vec<usize> = (1..=KMAX).map(|k| 2 * k).collect();
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(KMAX);
    let mut err = f64::INFINITY;
    let mut best = z.to_vec();
    for k in 0..KMAX {
        let mut row = vec![0.0; d];
        midpoint(sys, t, z, &dz0, h, seq[k], &mut row);
        // Aitken-Neville in h^2
        let mut prev = row.clone();
        let mut cur_row = vec![row];
        for j in 1..=k {
            let ratio = (seq[k] as f64 / seq[k - j] as f64).powi(2) - 1.0;
            let below = &table[k - 1][(j - 1) * d..j * d];
            let next: Vec<f64> = (0..d).map(|i| prev[i] + (prev[i] - below[i]) / ratio).collect();
            cur_row.push(next.clone());
            prev = next;
        }
        if k >= 1 {
            let a = &cur_row[k];
            let b = &cur_row[k - 1];
            let mut e = 0.0f64;
            for i in 0..d {
                let sc = opt.atol + opt.rtol * a[i].abs().max(z[i].abs());
                e = e.max((a[i] - b[i]).abs() / sc);
            }
            err = e;
            best = a.clone();
        }
        table.push(cur_row.concat());
        if k >= 3 && err <= 1.0 {
            break;
        }
    }
    (best, err)
}

/// Integrates from `t0` through the increasing `times`, returning the state
/// at each requested time. Steps are cut to land exactly on output times.
pub fn gbs_integrate<S: System>(sys: &S, t0: f64, z0: &[f64], times: &[f64], opt: &GbsOptions) -> Result<Vec<Vec<f64>>> {
    let mut t = t0;
    let mut z = z0.to_vec();
    let dir = if times.last().copied().unwrap_or(t0) >= t0 { 1.0 } else { -1.0 };
    let mut h = opt.h_init.abs() * dir;
    let mut out = Vec::with_capacity(times.len());
    let mut steps = 0usize;
    for &target in times {
        while (target - t) * dir > 1e-15 * (1.0 + t.abs()) {
            let left = target - t;
            let last = h.abs() >= left.abs();
            let hh = if last { left } else { h };
            let (zn, err) = gbs_step(sys, t, &z, hh, opt);
            steps += 1;
            if steps > opt.max_steps {
                return Err(Error::StepUnderflow(t));
            }
            if err <= 1.0 && zn.iter().all(|v| v.is_finite()) {
                t = if last { target } else { t + hh };
                z = zn;
                let fac = if err > 0.0 { (0.9 * err.powf(-1.0 / 15.0)).clamp(0.5, 3.0) } else { 3.0 };
                if !last {
                    h = hh * fac;
                }
            } else {
                let fac = if err.is_finite() { (0.9 * err.powf(-1.0 / 15.0)).clamp(0.1, 0.7) } else { 0.25 };
                h = hh * fac;
                if h.abs() < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::StepUnderflow(t));
                }
            }
        }
        out.push(z.clone());
    }
    Ok(out)
}
