//! Steady states `u'' = V'(u)` of the wave equation under spatial
//! discretization: the leapfrog (Stormer-Verlet) map, the 3-stage Lobatto
//! IIIA method, and the exact flow on the saddle energy level.
//!
//! All three maps are reversible under `R(u, v) = (u, -v)`. An unstable
//! manifold that meets the fixed line `v = 0` therefore carries a symmetric
//! orbit homoclinic to its saddle.

use nalgebra::{Matrix2, Matrix4, Vector4};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlin::Nonlinearity;
use crate::ode::{gbs_integrate, GbsOptions};
use crate::roots::{all_roots, brent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpatialScheme {
    LeapfrogSpatial,
    LobattoIIIA3,
    /// The continuous flow, used as the reference.
    ExactFlow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitClass {
    Heteroclinic,
    Homoclinic,
    Periodic,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EquilibriumKind {
    Saddle,
    Centre,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Equilibrium {
    pub u: f64,
    pub vpp: f64,
    pub kind: EquilibriumKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct SteadyStateOrbit {
    pub scheme: SpatialScheme,
    pub dx: f64,
    pub samples: Vec<(f64, f64)>,
    pub classification: OrbitClass,
    /// Equilibria (by position) the two endpoints sit on, if any.
    pub start: Option<f64>,
    pub end: Option<f64>,
    /// `|v|` at the point where a symmetric orbit was closed by reflection.
    pub symmetry_defect: Option<f64>,
}

impl SteadyStateOrbit {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,u,du,classification\n");
        for (k, (u, v)) in self.samples.iter().enumerate() {
            s += &format!("{},{:.16e},{:.16e},{:?}\n", k, u, v, self.classification);
        }
        s
    }
}

/// Endpoint proximity for classification.
pub const ENDPOINT_TOL: f64 = 1e-6;

/// Zeros of `V'` in `[lo, hi]`, typed by the sign of `V''`.
pub fn steady_equilibria(nl: &Nonlinearity, lo: f64, hi: f64) -> Result<Vec<Equilibrium>> {
    if !nl.is_smooth() {
        return Err(Error::NotSmooth("steady states"));
    }
    let cells = ((hi - lo) / 0.01).ceil().max(10.0) as usize;
    let roots = all_roots(|u| nl.vprime(u).unwrap_or(f64::NAN), lo, hi, cells, 1e-15);
    roots
        .into_iter()
        .map(|u| {
            let vpp = nl.derivative(u, 1)?;
            let kind = if vpp > 0.0 { EquilibriumKind::Saddle } else { EquilibriumKind::Centre };
            Ok(Equilibrium { u, vpp, kind })
        })
        .collect()
}

const LOBATTO_A: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0], [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]];

fn verlet(nl: &Nonlinearity, h: f64, (u, v): (f64, f64)) -> Result<(f64, f64)> {
    let vh = v + 0.5 * h * nl.vprime(u)?;
    let u1 = u + h * vh;
    Ok((u1, vh + 0.5 * h * nl.vprime(u1)?))
}

/// Stage equations solved by Newton until the update is below `1e-12`.
fn lobatto(nl: &Nonlinearity, h: f64, (u, v): (f64, f64)) -> Result<(f64, f64)> {
    let a = LOBATTO_A;
    let f1 = nl.vprime(u)?;
    // unknowns (U2, V2, U3, V3); explicit predictor
    let mut x = Vector4::new(u + 0.5 * h * v, v + 0.5 * h * f1, u + h * v, v + h * f1);
    for _ in 0..50 {
        let fu = [f1, nl.vprime(x[0])?, nl.vprime(x[2])?];
        let dfu = [nl.derivative(x[0], 1)?, nl.derivative(x[2], 1)?];
        let vs = [v, x[1], x[3]];
        let mut g = Vector4::zeros();
        let mut jac = Matrix4::identity();
        for (row, i) in [(0usize, 1usize), (2, 2)] {
            let ai = a[i];
            g[row] = x[row] - u - h * (ai[0] * vs[0] + ai[1] * vs[1] + ai[2] * vs[2]);
            g[row + 1] = x[row + 1] - v - h * (ai[0] * fu[0] + ai[1] * fu[1] + ai[2] * fu[2]);
            jac[(row, 1)] -= h * ai[1];
            jac[(row, 3)] -= h * ai[2];
            jac[(row + 1, 0)] -= h * ai[1] * dfu[0];
            jac[(row + 1, 2)] -= h * ai[2] * dfu[1];
        }
        let dx = jac.lu().solve(&g).ok_or(Error::Singular)?;
        x -= dx;
        if dx.amax() <= 1e-15 * (1.0 + x.amax()) {
            return Ok((x[2], x[3]));
        }
    }
    Err(Error::NoConvergence { iterations: 50, residual: f64::NAN })
}

/// One step of length `h` (negative steps run the inverse map).
pub fn spatial_step(nl: &Nonlinearity, scheme: SpatialScheme, h: f64, z: (f64, f64)) -> Result<(f64, f64)> {
    match scheme {
        SpatialScheme::LeapfrogSpatial => verlet(nl, h, z),
        SpatialScheme::LobattoIIIA3 => lobatto(nl, h, z),
        SpatialScheme::ExactFlow => {
            let sys = (2usize, |_t: f64, y: &[f64], o: &mut [f64]| {
                o[0] = y[1];
                o[1] = nl.vprime(y[0]).unwrap_or(f64::NAN);
            });
            let opt = GbsOptions { rtol: 1e-14, atol: 1e-15, h_init: h.abs().min(0.1), ..Default::default() };
            let out = gbs_integrate(&sys, 0.0, &[z.0, z.1], &[h], &opt)?;
            Ok((out[0][0], out[0][1]))
        }
    }
}

fn dist(z: (f64, f64), u: f64) -> f64 {
    (z.0 - u).hypot(z.1)
}

fn nearest(z: (f64, f64), eqs: &[Equilibrium], tol: f64) -> Option<f64> {
    eqs.iter().map(|e| (dist(z, e.u), e.u)).filter(|(d, _)| *d <= tol).min_by(|a, b| a.0.partial_cmp(&b.0).unwrap()).map(|(_, u)| u)
}

/// Endpoint rule: both ends on one equilibrium after an excursion is
/// homoclinic, ends on two distinct equilibria heteroclinic. Otherwise an
/// orbit that stays within one period cell of its start and comes back
/// near it is periodic; anything else is reported unbounded.
pub fn classify_orbit(samples: &[(f64, f64)], eqs: &[Equilibrium]) -> (OrbitClass, Option<f64>, Option<f64>) {
    let (first, last) = (samples[0], *samples.last().unwrap());
    let start = nearest(first, eqs, ENDPOINT_TOL);
    let end = nearest(last, eqs, ENDPOINT_TOL);
    let (far_k, excursion) = samples.iter().enumerate().map(|(k, z)| (k, (z.0 - first.0).hypot(z.1 - first.1))).fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let class = match (start, end) {
        (Some(a), Some(b)) if a != b => OrbitClass::Heteroclinic,
        (Some(_), Some(_)) if excursion > 1e-3 => OrbitClass::Homoclinic,
        _ => {
            let bounded = samples.iter().all(|z| (z.0 - first.0).abs() <= 2.0 * std::f64::consts::PI);
            let back = samples[far_k..].iter().map(|z| (z.0 - first.0).hypot(z.1 - first.1)).fold(f64::INFINITY, f64::min);
            if bounded && excursion > 0.0 && back <= 1e-2 * excursion {
                OrbitClass::Periodic
            } else {
                OrbitClass::Unbounded
            }
        }
    };
    (class, start, end)
}

/// Iterates each seed forward over `length` (backward when `dx < 0`) and
/// classifies the orbit by its endpoints. Seeds run in parallel.
pub fn steady_state_portrait(nl: &Nonlinearity, scheme: SpatialScheme, dx: f64, seeds: &[(f64, f64)], length: f64) -> Result<Vec<SteadyStateOrbit>> {
    if dx == 0.0 || !dx.is_finite() {
        return Err(Error::InvalidParams("dx must be nonzero".into()));
    }
    let lo = seeds.iter().map(|s| s.0).fold(f64::INFINITY, f64::min) - 8.0;
    let hi = seeds.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max) + 8.0;
    let eqs = steady_equilibria(nl, lo, hi)?;
    let steps = (length / dx.abs()).ceil() as usize;
    seeds
        .par_iter()
        .map(|&z0| {
            let mut z = z0;
            let mut samples = vec![z];
            for _ in 0..steps {
                z = spatial_step(nl, scheme, dx, z)?;
                samples.push(z);
                if (z.0 - z0.0).abs() > 3.0 * std::f64::consts::PI {
                    break;
                }
            }
            let (classification, start, end) = classify_orbit(&samples, &eqs);
            Ok(SteadyStateOrbit { scheme, dx, samples, classification, start, end, symmetry_defect: None })
        })
        .collect()
}

fn step_jacobian(nl: &Nonlinearity, scheme: SpatialScheme, h: f64, z: (f64, f64)) -> Result<Matrix2<f64>> {
    let e = 1e-6;
    let mut j = Matrix2::zeros();
    for c in 0..2 {
        let (dp, dm) = if c == 0 { ((z.0 + e, z.1), (z.0 - e, z.1)) } else { ((z.0, z.1 + e), (z.0, z.1 - e)) };
        let (p, m) = (spatial_step(nl, scheme, h, dp)?, spatial_step(nl, scheme, h, dm)?);
        j[(0, c)] = (p.0 - m.0) / (2.0 * e);
        j[(1, c)] = (p.1 - m.1) / (2.0 * e);
    }
    Ok(j)
}

/// Unstable multiplier and unit eigenvector (with positive `u` component)
/// of the one-step map at a saddle.
pub fn unstable_direction(nl: &Nonlinearity, scheme: SpatialScheme, h: f64, saddle: f64) -> Result<(f64, (f64, f64))> {
    let j = step_jacobian(nl, scheme, h, (saddle, 0.0))?;
    let (tr, det) = (j.trace(), j.determinant());
    let disc = tr * tr / 4.0 - det;
    if disc <= 0.0 {
        return Err(Error::RootStructure("equilibrium is not a saddle of the map".into()));
    }
    let mu = tr / 2.0 + disc.sqrt();
    // (J - mu I) e = 0
    let (a, b) = (j[(0, 0)] - mu, j[(0, 1)]);
    let (mut ex, mut ey) = if b.abs() > a.abs() { (1.0, -a / b) } else { (-b / a, 1.0) };
    let n = ex.hypot(ey);
    ex /= n;
    ey /= n;
    if ex < 0.0 {
        ex = -ex;
        ey = -ey;
    }
    Ok((mu, (ex, ey)))
}

fn orbit_from(nl: &Nonlinearity, scheme: SpatialScheme, h: f64, z0: (f64, f64), steps: usize) -> Result<Vec<(f64, f64)>> {
    let mut z = z0;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(z);
    for _ in 0..steps {
        z = spatial_step(nl, scheme, h, z)?;
        out.push(z);
    }
    Ok(out)
}

/// Shooting length in units of the saddle's time scale.
pub fn shooting_length(vpp: f64) -> f64 {
    40.0 / vpp.abs().sqrt()
}

/// Both branches of the unstable manifold of `saddle` under a map with step
/// `dx`, seeded at distance `eps` along the unstable eigenvector.
///
/// Each branch is followed until it crosses `v = 0`, leaves the period cell
/// or has run three shooting lengths. On a crossing the seed is moved along
/// the fundamental domain until the orbit hits `v = 0`; reversibility then
/// supplies the second half as the reflected first half. Iterating the map
/// forward instead would only measure how fast round-off grows on the way
/// back to the saddle.
pub fn saddle_orbits(nl: &Nonlinearity, scheme: SpatialScheme, dx: f64, saddle: f64, eps: f64) -> Result<Vec<SteadyStateOrbit>> {
    if scheme == SpatialScheme::ExactFlow {
        return continuous_separatrices(nl, saddle, eps, dx);
    }
    let eqs = steady_equilibria(nl, saddle - 2.0 * std::f64::consts::PI - 2.0, saddle + 2.0 * std::f64::consts::PI + 2.0)?;
    let vpp = nl.derivative(saddle, 1)?;
    let (mu, e) = unstable_direction(nl, scheme, dx, saddle)?;
    let cap = (3.0 * shooting_length(vpp) / dx).ceil() as usize;
    let cell = 2.0 * std::f64::consts::PI + 1.0;
    let mut out = Vec::new();
    for sgn in [1.0, -1.0] {
        let seed = |s: f64| (saddle + sgn * s * e.0, sgn * s * e.1);
        let mut samples = vec![seed(eps)];
        let mut crossing = None;
        let mut symmetry_defect = None;
        let mut left = false;
        for k in 0..cap {
            let z = spatial_step(nl, scheme, dx, samples[k])?;
            samples.push(z);
            if left && samples[k].1 * z.1 <= 0.0 {
                crossing = Some(k);
                break;
            }
            left |= dist(z, saddle) > 0.1;
            if (z.0 - saddle).abs() > cell {
                break;
            }
        }
        if let Some(k) = crossing {
            let vk = |s: f64| orbit_from(nl, scheme, dx, seed(s), k).map(|o| o[k].1).unwrap_or(f64::NAN);
            let root = [(eps, mu * eps), (eps / mu, eps)].into_iter().find_map(|(a, b)| {
                if vk(a) * vk(b) < 0.0 {
                    brent(&vk, a, b, 1e-15 * b, 200).ok()
                } else {
                    None
                }
            });
            if let Some(s) = root {
                let half = orbit_from(nl, scheme, dx, seed(s), k)?;
                symmetry_defect = Some(half[k].1.abs());
                samples = half.clone();
                samples.extend(half[..k].iter().rev().map(|z| (z.0, -z.1)));
            }
        }
        let (classification, start, end) = classify_orbit(&samples, &eqs);
        out.push(SteadyStateOrbit { scheme, dx, samples, classification, start, end, symmetry_defect });
    }
    Ok(out)
}

const GL5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// `V(b) - V(a)` as the integral of `V'`, which keeps full relative
/// accuracy when `b` is close to an equilibrium `a`.
pub fn potential_difference(nl: &Nonlinearity, a: f64, b: f64) -> Result<f64> {
    let panels = ((b - a).abs() / 0.25).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in GL5 {
            sum += w * nl.vprime(mid + 0.5 * h * x)?;
        }
    }
    Ok(0.5 * h * sum)
}

/// The exact separatrices of `u'' = V'(u)` through `saddle`: on its energy
/// level `u' = +-sqrt(2 (V(u) - V(u_s)))`, integrated from `u_s +- eps` and
/// sampled every `dx` over one shooting length. A turning point before the
/// next equilibrium makes the orbit symmetric and homoclinic; it is then
/// completed by reflection.
pub fn continuous_separatrices(nl: &Nonlinearity, saddle: f64, eps: f64, dx: f64) -> Result<Vec<SteadyStateOrbit>> {
    let eqs = steady_equilibria(nl, saddle - 2.0 * std::f64::consts::PI - 2.0, saddle + 2.0 * std::f64::consts::PI + 2.0)?;
    let length = shooting_length(nl.derivative(saddle, 1)?);
    let m = (length / dx).ceil() as usize;
    let times: Vec<f64> = (1..=m).map(|k| k as f64 * dx).collect();
    let mut out = Vec::new();
    for sgn in [1.0, -1.0] {
        let radicand = |u: f64| 2.0 * potential_difference(nl, saddle, u).unwrap_or(f64::NAN);
        let sys = (1usize, |_t: f64, y: &[f64], o: &mut [f64]| o[0] = sgn * radicand(y[0]).max(0.0).sqrt());
        let opt = GbsOptions { rtol: 1e-14, atol: 1e-16, h_init: 1e-3, ..Default::default() };
        let u0 = saddle + sgn * eps;
        let us = gbs_integrate(&sys, 0.0, &[u0], &times, &opt)?;
        let mut samples = vec![(u0, sgn * radicand(u0).max(0.0).sqrt())];
        for u in us.iter().map(|y| y[0]) {
            samples.push((u, sgn * radicand(u).max(0.0).sqrt()));
        }
        // a genuine turning point (v = 0 away from every equilibrium)
        let stall = samples.iter().position(|z| z.1 == 0.0 && eqs.iter().all(|e| (z.0 - e.u).abs() > 1e-3));
        if let Some(k) = stall {
            samples.truncate(k + 1);
            let back: Vec<(f64, f64)> = samples[..k].iter().rev().map(|z| (z.0, -z.1)).collect();
            samples.extend(back);
        }
        let (classification, start, end) = classify_orbit(&samples, &eqs);
        out.push(SteadyStateOrbit { scheme: SpatialScheme::ExactFlow, dx, samples, classification, start, end, symmetry_defect: stall.map(|_| 0.0) });
    }
    Ok(out)
}

/// The saddle of `nl` nearest `-pi`, found by bisection on `[-pi-1, -pi+1]`.
pub fn saddle_near_minus_pi(nl: &Nonlinearity) -> Result<Equilibrium> {
    let pi = std::f64::consts::PI;
    steady_equilibria(nl, -pi - 1.0, -pi + 1.0)?
        .into_iter()
        .filter(|e| e.kind == EquilibriumKind::Saddle)
        .min_by(|a, b| (a.u + pi).abs().partial_cmp(&(b.u + pi).abs()).unwrap())
        .ok_or_else(|| Error::RootStructure("no saddle near -pi".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const NL: Nonlinearity = Nonlinearity::AppendixForce;

    #[test]
    fn appendix_equilibria() {
        let s = saddle_near_minus_pi(&NL).unwrap();
        assert!((s.u.sin() + 0.4 * (2.0 * s.u).cos()).abs() < 1e-14);
        assert!((s.u + PI - 0.3244).abs() < 1e-3);
        let eqs = steady_equilibria(&NL, -PI - 1.0, PI + 1.0).unwrap();
        let centres: Vec<_> = eqs.iter().filter(|e| e.kind == EquilibriumKind::Centre).collect();
        assert_eq!(centres.len(), 1);
        assert!((centres[0].u + 0.3244).abs() < 1e-3);
    }

    #[test]
    fn lobatto_is_fourth_order_and_symmetric() {
        let z0 = (0.4, 0.3);
        let run = |n: usize, h: f64| (0..n).try_fold(z0, |z, _| spatial_step(&NL, SpatialScheme::LobattoIIIA3, h, z)).unwrap();
        let reference = spatial_step(&NL, SpatialScheme::ExactFlow, 2.0, z0).unwrap();
        let e1 = (run(10, 0.2).0 - reference.0).abs();
        let e2 = (run(20, 0.1).0 - reference.0).abs();
        assert!(((e1 / e2).log2() - 4.0).abs() < 0.3, "{}", (e1 / e2).log2());
        let fw = spatial_step(&NL, SpatialScheme::LobattoIIIA3, 0.3, z0).unwrap();
        let bw = spatial_step(&NL, SpatialScheme::LobattoIIIA3, -0.3, fw).unwrap();
        assert!((bw.0 - z0.0).abs() < 1e-14 && (bw.1 - z0.1).abs() < 1e-14);
    }

    #[test]
    fn verlet_positions_solve_the_three_term_recurrence() {
        let h = 0.2;
        let mut z = (-2.0, 0.4);
        let mut u = vec![z.0];
        for _ in 0..20 {
            z = spatial_step(&NL, SpatialScheme::LeapfrogSpatial, h, z).unwrap();
            u.push(z.0);
        }
        for w in u.windows(3) {
            let r = -(w[2] - 2.0 * w[1] + w[0]) / (h * h) + NL.vprime(w[1]).unwrap();
            assert!(r.abs() < 1e-11, "{r}");
        }
    }

    #[test]
    fn exact_flow_is_heteroclinic_both_ways() {
        let s = saddle_near_minus_pi(&NL).unwrap();
        let orbits = continuous_separatrices(&NL, s.u, 1e-8, 0.05).unwrap();
        for o in &orbits {
            assert_eq!(o.classification, OrbitClass::Heteroclinic);
            assert!((o.end.unwrap() - o.start.unwrap()).abs() > 6.0);
        }
    }

    #[test]
    fn energy_level_orbit_matches_the_planar_flow() {
        let s = saddle_near_minus_pi(&NL).unwrap();
        let o = &continuous_separatrices(&NL, s.u, 1e-8, 0.05).unwrap()[0];
        // restart the planar flow from a sample in the middle of the transit
        let k = o.samples.iter().position(|z| z.0 > -1.5).unwrap();
        let mut z = o.samples[k];
        for j in 1..=40 {
            z = spatial_step(&NL, SpatialScheme::ExactFlow, 0.05, z).unwrap();
            assert!((z.0 - o.samples[k + j].0).abs() < 1e-9);
        }
    }

    #[test]
    fn lobatto_finds_homoclinic_not_heteroclinic() {
        let s = saddle_near_minus_pi(&NL).unwrap();
        for dx in [0.1, 0.2, 0.4] {
            let orbits = saddle_orbits(&NL, SpatialScheme::LobattoIIIA3, dx, s.u, 1e-8).unwrap();
            let cls: Vec<_> = orbits.iter().map(|o| o.classification).collect();
            assert!(cls.contains(&OrbitClass::Homoclinic), "{dx}: {cls:?}");
            assert!(!cls.contains(&OrbitClass::Heteroclinic), "{dx}: {cls:?}");
        }
    }

    #[test]
    fn leapfrog_shadows_the_separatrix() {
        let s = saddle_near_minus_pi(&NL).unwrap();
        let centre = steady_equilibria(&NL, s.u, s.u + 2.0 * PI).unwrap().into_iter().find(|e| e.kind == EquilibriumKind::Centre).unwrap().u;
        let err = |dx: f64| {
            let o = &saddle_orbits(&NL, SpatialScheme::LeapfrogSpatial, dx, s.u, 1e-8).unwrap()[0];
            let u: Vec<f64> = o.samples.iter().map(|z| z.0).collect();
            let k = u.iter().position(|x| *x > centre).unwrap();
            // cubic interpolation of the crossing index
            let f = |t: f64| {
                let p = [u[k - 2], u[k - 1], u[k], u[k + 1]];
                let x = t - (k as f64 - 2.0);
                let l = |j: usize| (0..4).filter(|m| *m != j).map(|m| (x - m as f64) / (j as f64 - m as f64)).product::<f64>();
                (0..4).map(|j| p[j] * l(j)).sum::<f64>() - centre
            };
            let tc = brent(f, (k - 1) as f64, k as f64, 1e-14, 100).unwrap();
            let sys = (1usize, |_t: f64, y: &[f64], o: &mut [f64]| o[0] = (2.0 * potential_difference(&NL, s.u, y[0]).unwrap()).max(0.0).sqrt());
            let opt = GbsOptions { rtol: 1e-14, atol: 1e-15, ..Default::default() };
            let mut worst = 0.0f64;
            for i in 0..u.len() {
                let x = (i as f64 - tc) * dx;
                if x.abs() <= 3.0 && x.abs() > 1e-12 {
                    let exact = gbs_integrate(&sys, 0.0, &[centre], &[x], &opt).unwrap()[0][0];
                    worst = worst.max((exact - u[i]).abs());
                }
            }
            worst
        };
        let hs = [0.1, 0.05, 0.025];
        let es: Vec<f64> = hs.iter().map(|h| err(*h)).collect();
        let slope = crate::bea::studies::fit_slope(&hs, &es);
        assert!((slope - 2.0).abs() < 0.3, "{es:?} {slope}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn leapfrog_classes_are_reversal_invariant(u in -3.5f64..-0.5, v in -1.0f64..1.0, dx in 0.05f64..0.4) {
            let f = steady_state_portrait(&NL, SpatialScheme::LeapfrogSpatial, dx, &[(u, v)], 30.0).unwrap();
            let b = steady_state_portrait(&NL, SpatialScheme::LeapfrogSpatial, -dx, &[(u, -v)], 30.0).unwrap();
            prop_assert_eq!(f[0].classification, b[0].classification);
            for (p, q) in f[0].samples.iter().zip(&b[0].samples).take(100) {
                prop_assert!((p.0 - q.0).abs() < 1e-9 && (p.1 + q.1).abs() < 1e-9);
            }
        }
    }
}
