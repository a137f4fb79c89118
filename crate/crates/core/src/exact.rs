//! Continuous travelling waves of `(c^2 - 1) phi'' = -V'(phi)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlin::Nonlinearity;
use crate::ode::{composition_step, triple_jump_weights};
use crate::roots::{bisect, brent};
use crate::spectral::{check_speed, FourierWave};

/// `(phi, psi)` with `psi = (c^2 - 1) phi'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub phi: f64,
    pub psi: f64,
}

/// `H = psi^2 / (2 (c^2 - 1)) + V(phi)`.
pub fn reduced_hamiltonian(nl: &Nonlinearity, c: f64, p: PhasePoint) -> Result<f64> {
    check_speed(c)?;
    Ok(0.5 * p.psi * p.psi / (c * c - 1.0) + nl.potential(p.phi)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumKind {
    Saddle,
    Center,
    Degenerate,
}

/// Linear type of an equilibrium with curvature `vpp = V''` of the flow
/// `phi' = psi/(c^2-1)`, `psi' = -V'(phi)`. Eigenvalues solve `l^2 = -vpp/(c^2-1)`.
pub fn classify_equilibrium(vpp: f64, c: f64) -> Result<(EquilibriumKind, f64)> {
    check_speed(c)?;
    let l2 = -vpp / (c * c - 1.0);
    Ok(if l2 > 0.0 {
        (EquilibriumKind::Saddle, l2.sqrt())
    } else if l2 < 0.0 {
        (EquilibriumKind::Center, (-l2).sqrt())
    } else {
        (EquilibriumKind::Degenerate, 0.0)
    })
}

/// Front joining 0 and 1 for the McKean force, centred at `xi_star`.
pub fn mckean_front(c: f64, xi_star: f64, xi: f64) -> Result<f64> {
    if !(c.abs() < 1.0) {
        return Err(Error::InvalidParams(format!("front needs |c| < 1, got {c}")));
    }
    let w = (1.0 - c * c).sqrt();
    let s = xi - xi_star;
    Ok(if s > 0.0 {
        1.0 - 0.5 * (-s / w).exp()
    } else if s < 0.0 {
        0.5 * (s / w).exp()
    } else {
        0.5
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PieceKind {
    /// `c1 sin(w xi) + c2 cos(w xi)`
    Trig,
    /// `offset + c1 cosh(w (xi - centre))`, stored with `c2 = centre`
    Hyperbolic { offset: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub kind: PieceKind,
    pub c1: f64,
    pub c2: f64,
}

/// Periodic sawtooth wave on `[0, 2 tau)`: odd, antiperiodic over `tau`
/// and symmetric about `tau/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SawtoothPiecewiseWave {
    pub c: f64,
    pub tau: f64,
    pub xi_star: f64,
    pub omega: f64,
    pub pieces: Vec<Piece>,
}

impl SawtoothPiecewiseWave {
    fn piece_value(&self, p: &Piece, xi: f64) -> f64 {
        match p.kind {
            PieceKind::Trig => p.c1 * (self.omega * xi).sin() + p.c2 * (self.omega * xi).cos(),
            PieceKind::Hyperbolic { offset } => offset + p.c1 * (self.omega * (xi - p.c2)).cosh(),
        }
    }

    fn piece_slope(&self, p: &Piece, xi: f64) -> f64 {
        let w = self.omega;
        match p.kind {
            PieceKind::Trig => w * (p.c1 * (w * xi).cos() - p.c2 * (w * xi).sin()),
            PieceKind::Hyperbolic { .. } => w * p.c1 * (w * (xi - p.c2)).sinh(),
        }
    }

    fn locate(&self, xi: f64) -> (&Piece, f64) {
        let x = xi.rem_euclid(2.0 * self.tau);
        let p = self.pieces.iter().find(|p| x <= p.end).unwrap_or(&self.pieces[self.pieces.len() - 1]);
        (p, x)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let (p, x) = self.locate(xi);
        self.piece_value(p, x)
    }

    pub fn slope(&self, xi: f64) -> f64 {
        let (p, x) = self.locate(xi);
        self.piece_slope(p, x)
    }

    /// Values from the two pieces meeting at each junction.
    pub fn junction_mismatch(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| (self.piece_value(&w[0], w[0].end) - self.piece_value(&w[1], w[1].start)).abs())
            .fold(0.0, f64::max)
    }

    pub fn slope_mismatch(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| (self.piece_slope(&w[0], w[0].end) - self.piece_slope(&w[1], w[1].start)).abs())
            .fold(0.0, f64::max)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.start).chain(std::iter::once(2.0 * self.tau)).collect()
    }
}

/// Builds the periodic sawtooth wave with half-period `tau`, fixing
/// `xi_star` by C1 matching at the breakpoint `phi = 1`.
pub fn sawtooth_periodic_wave(c: f64, tau: f64) -> Result<SawtoothPiecewiseWave> {
    if !(c.abs() < 1.0) || !(tau > 0.0) {
        return Err(Error::InvalidParams(format!("sawtooth wave needs |c| < 1 and tau > 0 (c={c}, tau={tau})")));
    }
    let w = 1.0 / (1.0 - c * c).sqrt();
    let hi = (0.5 * tau).min(0.5 * PI / w);
    // cot(w x) = tanh(w (tau/2 - x))
    let g = |x: f64| 1.0 / (w * x).tan() - (w * (0.5 * tau - x)).tanh();
    let lo = 1e-12 * hi;
    if g(hi) >= 0.0 {
        return Err(Error::NoBracket(format!("no admissible xi* for tau={tau}, c={c}")));
    }
    let xs = bisect(g, lo, hi, 1e-15 * tau)?;
    let s = (w * xs).sin();
    let ch = (w * (0.5 * tau - xs)).cosh();
    let t = tau;
    let trig = |start: f64, end: f64, shift: f64, sign: f64| {
        // sign * sin(w (xi - shift)) / s
        let (a, b) = ((w * shift).cos(), (w * shift).sin());
        Piece { start, end, kind: PieceKind::Trig, c1: sign * a / s, c2: -sign * b / s }
    };
    let hyp = |start: f64, end: f64, centre: f64, sign: f64| Piece {
        start,
        end,
        kind: PieceKind::Hyperbolic { offset: 2.0 * sign },
        c1: -sign / ch,
        c2: centre,
    };
    let pieces = vec![
        trig(0.0, xs, 0.0, 1.0),
        hyp(xs, t - xs, 0.5 * t, 1.0),
        trig(t - xs, t + xs, t, -1.0),
        hyp(t + xs, 2.0 * t - xs, 1.5 * t, -1.0),
        trig(2.0 * t - xs, 2.0 * t, 2.0 * t, 1.0),
    ];
    Ok(SawtoothPiecewiseWave { c, tau, xi_star: xs, omega: w, pieces })
}

/// Periodic orbit of `y'' = f(y)`, `f = -V'/(c^2-1)`, around a centre.
#[derive(Debug, Clone, Serialize)]
pub struct PendulumOrbit {
    pub centre: f64,
    /// Displacement of the turning point at `xi = 0` from the centre.
    pub amplitude: f64,
    pub period: f64,
    pub linear_period: f64,
}

fn reduced_force(nl: &Nonlinearity, c: f64) -> impl Fn(f64) -> f64 + '_ {
    let a = c * c - 1.0;
    move |y: f64| -nl.vprime(y).unwrap_or(f64::NAN) / a
}

/// Default centre: an equilibrium where `f' < 0`.
pub fn default_centre(nl: &Nonlinearity, c: f64) -> Result<f64> {
    check_speed(c)?;
    let a = c * c - 1.0;
    let fprime = |u: f64| -nl.derivative(u, 1).unwrap_or(f64::NAN) / a;
    let vp = |u: f64| nl.vprime(u).unwrap_or(f64::NAN);
    let mut cands = crate::roots::all_roots(vp, -PI - 1.0, PI + 1.0, 400, 1e-15);
    // nearest to the origin, positive first on ties
    cands.sort_by(|x, y| ((x.abs() * 1e9).round(), -x).partial_cmp(&((y.abs() * 1e9).round(), -y)).unwrap());
    cands
        .into_iter()
        .find(|&u| fprime(u) < 0.0)
        .ok_or_else(|| Error::InvalidParams("no centre equilibrium near the origin".into()))
}

/// Turning-point-to-turning-point half period of the orbit started at
/// `(centre + amp, 0)`. `h` is the base step.
fn half_period<F: Fn(f64) -> f64>(f: &F, w: &[f64], centre: f64, amp: f64, h: f64, t_max: f64) -> Option<f64> {
    let (mut y, mut v) = (centre + amp, 0.0);
    let mut t = 0.0;
    let mut moved = false;
    while t < t_max {
        let (yn, vn) = composition_step(f, w, y, v, h);
        if !yn.is_finite() {
            return None;
        }
        let sgn0 = -amp.signum();
        if moved && vn * sgn0 <= 0.0 {
            // refine the final substep length so that v = 0
            let g = |s: f64| composition_step(f, w, y, v, s).1;
            let s = brent(g, 0.0, h, 1e-16 * h.max(1.0), 200).ok()?;
            return Some(t + s);
        }
        if vn * sgn0 > 0.0 {
            moved = true;
        }
        y = yn;
        v = vn;
        t += h;
    }
    None
}

/// Even periodic orbit with period `period` around `centre`, sampled and
/// returned as Fourier coefficients with `modes` modes.
pub fn pendulum_orbit(nl: &Nonlinearity, c: f64, centre: f64, period: f64, modes: usize) -> Result<(FourierWave, PendulumOrbit)> {
    check_speed(c)?;
    if !nl.is_smooth() {
        return Err(Error::NotSmooth("pendulum orbit"));
    }
    let a = c * c - 1.0;
    let fp = -nl.derivative(centre, 1)? / a;
    if !(fp < 0.0) {
        return Err(Error::InvalidParams(format!("equilibrium {centre} is not a centre (f'={fp})")));
    }
    let t0 = 2.0 * PI / (-fp).sqrt();
    let f = reduced_force(nl, c);
    let w = triple_jump_weights();
    let h = t0 / 400.0;
    // amplitude range: up to the nearest equilibrium on the positive side
    let vp = |u: f64| nl.vprime(u).unwrap_or(f64::NAN);
    let a_max = crate::roots::all_roots(vp, centre + 1e-6, centre + 2.0 * PI, 2000, 1e-15)
        .first()
        .map(|r| r - centre)
        .unwrap_or(2.0 * PI);
    let per = |amp: f64| half_period(&f, &w, centre, amp, h, 50.0 * period.max(t0)).map(|s| 2.0 * s);
    let target = |amp: f64| per(amp).map(|p| p - period).unwrap_or(f64::INFINITY);
    let grid = 96;
    let mut bracket = None;
    let mut prev = (1e-4 * a_max, target(1e-4 * a_max));
    for k in 1..=grid {
        let amp = a_max * (1e-4 + (1.0 - 1e-4 - 1e-9) * k as f64 / grid as f64);
        let v = target(amp);
        if prev.1.is_finite() && v.is_finite() && prev.1.signum() != v.signum() {
            bracket = Some((prev.0, amp));
            break;
        }
        prev = (amp, v);
    }
    let (lo, hi) = bracket.ok_or_else(|| Error::NoBracket(format!("no orbit with period {period} (linear period {t0})")))?;
    let amp = brent(target, lo, hi, 1e-15, 200)?;
    // sample on a uniform grid of 2 * modes points
    let m = 2 * modes;
    let dt = period / m as f64;
    let sub = (dt / h).ceil().max(1.0) as usize;
    let hs = dt / sub as f64;
    let (mut y, mut v) = (centre + amp, 0.0);
    let mut samples = Vec::with_capacity(m);
    for _ in 0..m {
        samples.push(y);
        for _ in 0..sub {
            (y, v) = composition_step(&f, &w, y, v, hs);
        }
    }
    let wave = FourierWave::from_samples(0.5 * period, &samples);
    Ok((wave, PendulumOrbit { centre, amplitude: amp, period, linear_period: t0 }))
}

/// Pendulum wave around the default centre.
pub fn pendulum_periodic_wave(nl: &Nonlinearity, c: f64, period: f64, modes: usize) -> Result<(FourierWave, PendulumOrbit)> {
    let centre = default_centre(nl, c)?;
    pendulum_orbit(nl, c, centre, period, modes)
}
