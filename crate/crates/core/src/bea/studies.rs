//! Integration of truncated modified equations and the comparisons built on
//! it: error ladders, `(sigma, kappa)` error contours and resonance curves.

use rayon::prelude::*;
use serde::Serialize;

use super::{ModifiedEquation, Order};
use crate::dtw::continuation::{continuation_in_t, initial_seed};
use crate::dtw::newton::{smooth_newton_wave, NewtonOptions};
use crate::dtw::resonance::window_points;
use crate::error::{Error, Result};
use crate::nonlin::Nonlinearity;
use crate::ode::{gbs_integrate, GbsOptions};
use crate::spectral::{FourierWave, WaveParams};

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub y: Vec<f64>,
    pub ydot: Vec<f64>,
}

/// Integrates `y'' = field(y, y')` from `t = 0` and reports the state at the
/// requested `times` (monotone, either direction). Local tolerance `1e-12`
/// unless `opts` says otherwise.
pub fn integrate_modified(me: &ModifiedEquation, initial: (f64, f64), times: &[f64], opts: Option<GbsOptions>) -> Result<Trajectory> {
    let opt = opts.unwrap_or_default();
    let sys = (2usize, |_t: f64, z: &[f64], o: &mut [f64]| {
        o[0] = z[1];
        o[1] = me.field(z[0], z[1]).unwrap_or(f64::NAN);
    });
    let out = gbs_integrate(&sys, 0.0, &[initial.0, initial.1], times, &opt)?;
    Ok(Trajectory { times: times.to_vec(), y: out.iter().map(|z| z[0]).collect(), ydot: out.iter().map(|z| z[1]).collect() })
}

fn uniform(t: f64, m: usize) -> Vec<f64> {
    (0..m).map(|k| k as f64 * t / m as f64).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderResult {
    pub params: WaveParams,
    pub n: usize,
    /// `(y(0), y'(0))` taken from the discrete wave.
    pub initial: (f64, f64),
    pub newton_residual: f64,
    pub xi: Vec<f64>,
    /// `y - y1`, `y - y2`, `y - y3` at `xi`.
    pub errors: [Vec<f64>; 3],
    pub sup_norms: [f64; 3],
}

impl LadderResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("xi,e1,e2,e3\n");
        for (k, x) in self.xi.iter().enumerate() {
            s += &format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", x, self.errors[0][k], self.errors[1][k], self.errors[2][k]);
        }
        s
    }
}

pub const LADDER_SAMPLES: usize = 1024;

/// Discrete wave at `params` (period `2 tau`) against the three truncations
/// started from its own value and slope at `xi = 0`.
pub fn error_ladder(nl: &Nonlinearity, params: &WaveParams, n: usize, opts: &NewtonOptions) -> Result<LadderResult> {
    let t = params.period();
    let seed = initial_seed(nl, params.c, t, n)?;
    let run = smooth_newton_wave(nl, params, n, &seed, opts)?;
    let w = &run.wave;
    let y0 = w.eval(0.0);
    let v0 = w.spectral_derivative(1).eval(0.0);
    let xi = uniform(t, LADDER_SAMPLES);
    let exact = w.evaluate_many(&xi);
    let gbs = GbsOptions { rtol: 1e-13, atol: 1e-14, ..Default::default() };
    let me = ModifiedEquation::new(nl, params.c, params.sigma, params.kappa, Order::O6)?;
    let mut errors: [Vec<f64>; 3] = Default::default();
    let mut sup_norms = [0.0; 3];
    for (k, o) in [Order::O2, Order::O4, Order::O6].into_iter().enumerate() {
        let tr = integrate_modified(&me.with_order(o), (y0, v0), &xi, Some(gbs))?;
        errors[k] = exact.iter().zip(&tr.y).map(|(a, b)| a - b).collect();
        sup_norms[k] = errors[k].iter().fold(0.0f64, |m, e| m.max(e.abs()));
    }
    Ok(LadderResult { params: *params, n, initial: (y0, v0), newton_residual: *run.residual_history.last().unwrap(), xi, errors, sup_norms })
}

/// Spread of `|second difference|` of `v` in each of `windows` equal blocks.
/// The curve is not assumed periodic.
pub fn windowed_second_difference_spread(v: &[f64], windows: usize) -> Vec<f64> {
    let d2: Vec<f64> = v.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]).abs()).collect();
    let len = d2.len() / windows;
    (0..windows)
        .map(|k| {
            let s = &d2[k * len..(k + 1) * len];
            s.iter().cloned().fold(f64::MIN, f64::max) - s.iter().cloned().fold(f64::MAX, f64::min)
        })
        .collect()
}

/// Largest ratio of a window's spread to the larger of its neighbours.
pub fn worst_window_ratio(spreads: &[f64]) -> f64 {
    let m = spreads.len();
    (0..m)
        .map(|k| {
            let left = if k > 0 { spreads[k - 1] } else { 0.0 };
            let nb = spreads.get(k + 1).copied().unwrap_or(0.0).max(left);
            if nb > 0.0 { spreads[k] / nb } else if spreads[k] > 0.0 { f64::INFINITY } else { 1.0 }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourResult {
    pub t: f64,
    pub c: f64,
    pub n: usize,
    pub sigma: Vec<f64>,
    pub kappa: Vec<f64>,
    /// `values[i][j]` at `(sigma[i], kappa[j])`; NaN for failed cells.
    pub values: Vec<Vec<f64>>,
}

impl ContourResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("sigma,kappa,value\n");
        for (i, si) in self.sigma.iter().enumerate() {
            for (j, kj) in self.kappa.iter().enumerate() {
                s += &format!("{:.16e},{:.16e},{:.16e}\n", si, kj, self.values[i][j]);
            }
        }
        s
    }
}

/// `log10` of the RMS gap (1024 samples) between the discrete wave and the
/// O4 truncation for one cell.
pub fn contour_cell(nl: &Nonlinearity, seed: &FourierWave, t: f64, c: f64, sigma: f64, kappa: f64, n: usize) -> Result<f64> {
    let p = WaveParams::new(c, sigma, kappa, 0.5 * t)?;
    let run = smooth_newton_wave(nl, &p, n, seed, &NewtonOptions::default())?;
    let me = ModifiedEquation::new(nl, c, sigma, kappa, Order::O4)?;
    let xi = uniform(t, LADDER_SAMPLES);
    let exact = run.wave.evaluate_many(&xi);
    let tr = integrate_modified(&me, (run.wave.eval(0.0), run.wave.spectral_derivative(1).eval(0.0)), &xi, None)?;
    let ms = exact.iter().zip(&tr.y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / xi.len() as f64;
    Ok(0.5 * ms.log10())
}

/// Cells run in parallel, each seeded with the continuous wave of period `t`.
pub fn contour_sweep(nl: &Nonlinearity, t: f64, c: f64, sigma: &[f64], kappa: &[f64], n: usize) -> Result<ContourResult> {
    if sigma.iter().chain(kappa).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParams("grid values must be positive".into()));
    }
    let seed = initial_seed(nl, c, t, n)?;
    let values = sigma
        .par_iter()
        .map(|&s| kappa.par_iter().map(|&k| contour_cell(nl, &seed, t, c, s, k, n).unwrap_or(f64::NAN)).collect())
        .collect();
    Ok(ContourResult { t, c, n, sigma: sigma.to_vec(), kappa: kappa.to_vec(), values })
}

#[derive(Debug, Clone, Serialize)]
pub struct AnomalyReport {
    /// Cell value minus the median of its finite 8-neighbours.
    pub excess: Vec<Vec<f64>>,
    /// `(i, j)` with `excess >= threshold`.
    pub anomalies: Vec<(usize, usize)>,
    pub bulk_pairs: usize,
    /// Fraction of adjacent non-anomalous pairs whose values differ by less than `threshold`.
    pub bulk_smooth_fraction: f64,
    pub bulk_max_jump: f64,
    pub threshold: f64,
}

impl AnomalyReport {
    /// Largest excess among cells within `radius` of `(s, k)`, with its location.
    pub fn max_excess_near(&self, grid: &ContourResult, s: f64, k: f64, radius: f64) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for (i, si) in grid.sigma.iter().enumerate() {
            for (j, kj) in grid.kappa.iter().enumerate() {
                let e = self.excess[i][j];
                if ((si - s).powi(2) + (kj - k).powi(2)).sqrt() <= radius && e.is_finite() && best.map_or(true, |b| e > b.0) {
                    best = Some((e, *si, *kj));
                }
            }
        }
        best
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len();
    if m % 2 == 1 { v[m / 2] } else { 0.5 * (v[m / 2 - 1] + v[m / 2]) }
}

pub fn contour_anomalies(grid: &ContourResult, threshold: f64) -> AnomalyReport {
    let v = &grid.values;
    let (ni, nj) = (v.len(), v.first().map_or(0, |r| r.len()));
    let mut excess = vec![vec![f64::NAN; nj]; ni];
    let mut anomalies = Vec::new();
    for i in 0..ni {
        for j in 0..nj {
            if !v[i][j].is_finite() {
                continue;
            }
            let mut nb = Vec::new();
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) != (0, 0) && a >= 0 && b >= 0 && (a as usize) < ni && (b as usize) < nj && v[a as usize][b as usize].is_finite() {
                        nb.push(v[a as usize][b as usize]);
                    }
                }
            }
            if nb.is_empty() {
                continue;
            }
            excess[i][j] = v[i][j] - median(nb);
            if excess[i][j] >= threshold {
                anomalies.push((i, j));
            }
        }
    }
    let bad = |i: usize, j: usize| !v[i][j].is_finite() || excess[i][j] >= threshold;
    let (mut pairs, mut smooth, mut jump) = (0usize, 0usize, 0.0f64);
    for i in 0..ni {
        for j in 0..nj {
            for (a, b) in [(i + 1, j), (i, j + 1)] {
                if a < ni && b < nj && !bad(i, j) && !bad(a, b) {
                    let d = (v[i][j] - v[a][b]).abs();
                    pairs += 1;
                    smooth += (d < threshold) as usize;
                    jump = jump.max(d);
                }
            }
        }
    }
    let frac = if pairs > 0 { smooth as f64 / pairs as f64 } else { 0.0 };
    AnomalyReport { excess, anomalies, bulk_pairs: pairs, bulk_smooth_fraction: frac, bulk_max_jump: jump, threshold }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonancePair {
    pub t: f64,
    pub r_discrete: f64,
    pub r_modified: f64,
}

/// The O4 measure uses the same window and phase as the discrete one: the
/// turning point sits at `T/4`, so a window point `x` maps to `|x - T/4|`
/// on the modified trajectory and `|y''|` comes straight from the field.
pub fn modified_resonance_measure(me: &ModifiedEquation, initial: (f64, f64), t: f64) -> Result<f64> {
    let pts = window_points(0.2 * t, 0.3 * t, 1000);
    let mut xs: Vec<f64> = pts.iter().map(|x| (x - 0.25 * t).abs()).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    let tr = integrate_modified(me, initial, &xs, None)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (y, v) in tr.y.iter().zip(&tr.ydot) {
        let a = me.field(*y, *v)?.abs();
        lo = lo.min(a);
        hi = hi.max(a);
    }
    let spread = hi - lo;
    Ok(if spread > 0.0 { spread.log10() } else { f64::NEG_INFINITY })
}

/// `R` against `T` for the discrete wave and its O4 truncation. Failed
/// discrete steps carry NaN in both columns.
pub fn resonance_comparison(nl: &Nonlinearity, sigma: f64, kappa: f64, c: f64, tgrid: &[f64], n: usize) -> Result<Vec<ResonancePair>> {
    let steps = continuation_in_t(nl, sigma, kappa, c, tgrid, n, &NewtonOptions::default())?;
    let me = ModifiedEquation::new(nl, c, sigma, kappa, Order::O4)?;
    steps
        .par_iter()
        .map(|s| match &s.run {
            Some(run) => {
                let init = (run.wave.eval(0.0), run.wave.spectral_derivative(1).eval(0.0));
                let rm = modified_resonance_measure(&me, init, s.t).unwrap_or(f64::NAN);
                Ok(ResonancePair { t: s.t, r_discrete: run.resonance_r, r_modified: rm })
            }
            None => Ok(ResonancePair { t: s.t, r_discrete: f64::NAN, r_modified: f64::NAN }),
        })
        .collect()
}
