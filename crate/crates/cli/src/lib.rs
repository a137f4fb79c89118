//! Run configuration and experiment dispatch for the `leapwave` binary.
//!
//! A run is described by a flat `key=value` map: per-experiment defaults,
//! then the optional config file, then `--set` overrides. Everything is
//! validated before the output directory is touched.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use leapwave_core::bea::{contour_anomalies, contour_sweep, error_ladder, resonance_comparison};
use leapwave_core::dtw::continuation::initial_seed;
use leapwave_core::dtw::{continuation_in_t, mckean_periodic_wave, sawtooth_discrete_wave, smooth_newton_wave, NewtonOptions};
use leapwave_core::exact::{mckean_front, sawtooth_periodic_wave};
use leapwave_core::pdesim::steady::saddle_near_minus_pi;
use leapwave_core::pdesim::{saddle_orbits, wave_transport_test, SpatialScheme};
use leapwave_core::{FourierWave, Nonlinearity, WaveParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Experiment {
    McKeanFront,
    McKeanPeriodic,
    Sawtooth,
    SmoothNewton,
    Continuation,
    BeaLadder,
    BeaContour,
    ResonanceCompare,
    PdeTransport,
    SteadyState,
}

pub const EXPERIMENTS: [Experiment; 10] = [
    Experiment::McKeanFront,
    Experiment::McKeanPeriodic,
    Experiment::Sawtooth,
    Experiment::SmoothNewton,
    Experiment::Continuation,
    Experiment::BeaLadder,
    Experiment::BeaContour,
    Experiment::ResonanceCompare,
    Experiment::PdeTransport,
    Experiment::SteadyState,
];

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::McKeanFront => "mckean-front",
            Experiment::McKeanPeriodic => "mckean-periodic",
            Experiment::Sawtooth => "sawtooth",
            Experiment::SmoothNewton => "smooth-newton",
            Experiment::Continuation => "continuation",
            Experiment::BeaLadder => "bea-ladder",
            Experiment::BeaContour => "bea-contour",
            Experiment::ResonanceCompare => "resonance-compare",
            Experiment::PdeTransport => "pde-transport",
            Experiment::SteadyState => "steady-state",
        }
    }

    /// Keys this experiment reads, with their defaults.
    pub fn defaults(self) -> Vec<(&'static str, String)> {
        let s = |v: f64| format!("{v}");
        let rt = s(0.5f64.sqrt());
        let two_pi = s(2.0 * PI);
        let mut d: Vec<(&str, String)> = match self {
            Experiment::McKeanFront => vec![("c", s(0.5)), ("xi_star", s(0.0)), ("span", s(10.0)), ("samples", "1001".into())],
            Experiment::McKeanPeriodic => vec![
                ("a", s(0.5)),
                ("c", s(0.5)),
                ("sigma", s(0.4)),
                ("kappa", s(0.2)),
                ("tau", s(30.0)),
                ("n", "4096".into()),
                ("samples", "2048".into()),
            ],
            Experiment::Sawtooth => vec![
                ("c", s(0.5)),
                ("sigma", s(0.4)),
                ("kappa", s(0.4 / 2f64.sqrt())),
                ("tau", s(10.0)),
                ("n", "256".into()),
                ("samples", "2048".into()),
            ],
            Experiment::SmoothNewton => vec![
                ("nonlinearity", "sine".into()),
                ("c", s(1.3)),
                ("sigma", s(1.0)),
                ("kappa", rt.clone()),
                ("tau", s(PI)),
                ("n", "64".into()),
                ("tol", s(1e-10)),
                ("max_iter", "25".into()),
                ("samples", "1024".into()),
            ],
            Experiment::Continuation => vec![
                ("nonlinearity", "sine".into()),
                ("c", s(1.3)),
                ("sigma", s(1.0)),
                ("kappa", rt.clone()),
                ("t_start", two_pi.clone()),
                ("t_stop", s(2.0 * PI + 1.2)),
                ("t_step", s(0.02)),
                ("n", "128".into()),
                ("tol", s(1e-10)),
                ("max_iter", "25".into()),
            ],
            Experiment::BeaLadder => vec![
                ("nonlinearity", "sine".into()),
                ("c", s(1.3)),
                ("sigma", s(0.2)),
                ("kappa", s(0.2)),
                ("tau", s(PI)),
                ("n", "64".into()),
                ("tol", s(1e-10)),
                ("max_iter", "25".into()),
            ],
            Experiment::BeaContour => vec![
                ("nonlinearity", "sine".into()),
                ("c", s(1.3)),
                ("t", two_pi.clone()),
                ("grid_min", s(0.2)),
                ("grid_max", s(1.2)),
                ("grid_count", "40".into()),
                ("n", "64".into()),
                ("threshold", s(0.5)),
            ],
            Experiment::ResonanceCompare => vec![
                ("nonlinearity", "sine".into()),
                ("c", s(1.3)),
                ("sigma", s(1.0)),
                ("kappa", rt),
                ("t_start", two_pi.clone()),
                ("t_stop", s(2.0 * PI + 1.2)),
                ("t_step", s(0.02)),
                ("n", "128".into()),
            ],
            Experiment::PdeTransport => vec![
                ("nonlinearity", "sine".into()),
                ("c", s(0.5)),
                ("t", two_pi),
                ("n", "512".into()),
                ("steps", "1000".into()),
            ],
            Experiment::SteadyState => vec![
                ("nonlinearity", "appendix".into()),
                ("scheme", "lobatto".into()),
                ("dx", s(0.1)),
                ("eps", s(1e-8)),
            ],
        };
        d.sort_by_key(|p| p.0);
        d
    }
}

impl FromStr for Experiment {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        EXPERIMENTS.iter().copied().find(|e| e.name() == s).ok_or_else(|| anyhow!("unknown experiment '{s}'"))
    }
}

/// Every key with a one-line description, for `--help`.
pub const KEY_DOCS: &[(&str, &str)] = &[
    ("a", "McKean threshold in (0,1)"),
    ("c", "wave speed; |c| != 1 (|c| < 1 for mckean-front)"),
    ("dx", "spatial step of the steady-state map (> 0)"),
    ("eps", "offset of the shooting seed from the saddle (> 0)"),
    ("grid_count", "cells per axis of the (sigma, kappa) sweep"),
    ("grid_max", "upper end of the sweep axis (excluded)"),
    ("grid_min", "lower end of the sweep axis (excluded)"),
    ("kappa", "time step of the scheme (> 0)"),
    ("max_iter", "Newton iteration cap"),
    ("n", "Fourier modes N (> 0)"),
    ("nonlinearity", "sine | appendix (smooth experiments)"),
    ("samples", "points in sampled wave CSVs"),
    ("scheme", "leapfrog | lobatto | exact (steady-state)"),
    ("sigma", "space step of the scheme (> 0)"),
    ("span", "half-width of the sampled front"),
    ("steps", "leapfrog time steps"),
    ("t", "period T (bea-contour, pde-transport)"),
    ("t_start", "first period of the T grid (>= 2 pi)"),
    ("t_step", "T grid spacing (> 0)"),
    ("t_stop", "last period of the T grid"),
    ("tau", "half-period (> 0)"),
    ("threshold", "log10 jump flagged as an anomaly"),
    ("tol", "Newton tolerance relative to 1 + max|phi|"),
    ("xi_star", "front centre"),
];

pub fn help_text() -> String {
    let mut s = String::from("CONFIG KEYS (config file lines or --set key=value):\n");
    for (k, d) in KEY_DOCS {
        let _ = writeln!(s, "  {k:<13}{d}");
    }
    s.push_str("\nDEFAULTS:\n");
    for e in EXPERIMENTS {
        let kv: Vec<String> = e.defaults().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "  {}: {}", e.name(), kv.join(" "));
    }
    s
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key=value", ln + 1))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Resolved keys, echoed into the manifest.
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Defaults, then `file`, then `overrides`; later entries win.
    pub fn resolve(experiment: Experiment, file: &[(String, String)], overrides: &[(String, String)]) -> Result<Self> {
        let mut values: BTreeMap<String, String> = experiment.defaults().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        for (k, v) in file.iter().chain(overrides) {
            if !values.contains_key(k) {
                bail!("key '{k}' is not used by {}", experiment.name());
            }
            values.insert(k.clone(), v.clone());
        }
        let cfg = RunConfig { experiment, values };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn str(&self, k: &str) -> &str {
        self.values.get(k).map(String::as_str).unwrap_or("")
    }

    pub fn f64(&self, k: &str) -> Result<f64> {
        let v: f64 = self.str(k).parse().with_context(|| format!("{k} must be a number"))?;
        if !v.is_finite() {
            bail!("{k} must be finite");
        }
        Ok(v)
    }

    pub fn usize(&self, k: &str) -> Result<usize> {
        self.str(k).parse().with_context(|| format!("{k} must be a non-negative integer"))
    }

    fn positive(&self, k: &str) -> Result<f64> {
        let v = self.f64(k)?;
        if v <= 0.0 {
            bail!("{k} must be positive, got {v}");
        }
        Ok(v)
    }

    fn count(&self, k: &str) -> Result<usize> {
        let v = self.usize(k)?;
        if v == 0 {
            bail!("{k} must be at least 1");
        }
        Ok(v)
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity> {
        match self.str("nonlinearity") {
            "sine" => Ok(Nonlinearity::Sine),
            "appendix" => Ok(Nonlinearity::AppendixForce),
            other => bail!("nonlinearity must be sine or appendix, got '{other}'"),
        }
    }

    pub fn scheme(&self) -> Result<SpatialScheme> {
        match self.str("scheme") {
            "leapfrog" => Ok(SpatialScheme::LeapfrogSpatial),
            "lobatto" => Ok(SpatialScheme::LobattoIIIA3),
            "exact" => Ok(SpatialScheme::ExactFlow),
            other => bail!("scheme must be leapfrog, lobatto or exact, got '{other}'"),
        }
    }

    fn newton(&self) -> Result<NewtonOptions> {
        Ok(NewtonOptions { tol: self.positive("tol")?, max_iter: self.count("max_iter")? })
    }

    fn params(&self) -> Result<WaveParams> {
        Ok(WaveParams::new(self.f64("c")?, self.positive("sigma")?, self.positive("kappa")?, self.positive("tau")?)?)
    }

    pub fn tgrid(&self) -> Result<Vec<f64>> {
        let (a, b, h) = (self.f64("t_start")?, self.f64("t_stop")?, self.positive("t_step")?);
        if a < 2.0 * PI - 1e-12 {
            bail!("t_start must be at least 2 pi");
        }
        if b < a {
            bail!("t_stop must not be below t_start");
        }
        let m = ((b - a) / h + 1e-9).floor() as usize;
        Ok((0..=m).map(|k| a + h * k as f64).collect())
    }

    pub fn sweep_axis(&self) -> Result<Vec<f64>> {
        let (lo, hi, m) = (self.positive("grid_min")?, self.f64("grid_max")?, self.count("grid_count")?);
        if hi <= lo {
            bail!("grid_max must exceed grid_min");
        }
        // interior of an (m+2)-point linspace
        Ok((1..=m).map(|k| lo + (hi - lo) * k as f64 / (m + 1) as f64).collect())
    }

    fn check_speed(&self) -> Result<f64> {
        let c = self.f64("c")?;
        if (c * c - 1.0).abs() < 1e-12 {
            bail!("c^2 must differ from 1 (got c={c})");
        }
        Ok(c)
    }

    /// Every numeric field is checked here, before anything is written.
    pub fn validate(&self) -> Result<()> {
        use Experiment::*;
        let e = self.experiment;
        if e != SteadyState && e != McKeanFront {
            self.check_speed()?;
        }
        if self.values.contains_key("nonlinearity") {
            self.nonlinearity()?;
        }
        for k in ["n", "samples", "steps", "grid_count"] {
            if self.values.contains_key(k) {
                self.count(k)?;
            }
        }
        for k in ["sigma", "kappa", "tau", "t", "dx", "eps", "span", "tol"] {
            if self.values.contains_key(k) {
                self.positive(k)?;
            }
        }
        match e {
            McKeanFront => {
                let c = self.f64("c")?;
                if c.abs() >= 1.0 {
                    bail!("mckean-front needs |c| < 1, got {c}");
                }
                self.f64("xi_star")?;
                if self.usize("samples")? < 2 {
                    bail!("samples must be at least 2");
                }
            }
            McKeanPeriodic => {
                Nonlinearity::mckean(self.f64("a")?)?;
                self.params()?.require_noncritical()?;
            }
            Sawtooth | SmoothNewton | BeaLadder => {
                self.params()?.require_noncritical()?;
                if e != Sawtooth {
                    self.newton()?;
                }
            }
            Continuation => {
                self.newton()?;
                self.tgrid()?;
            }
            ResonanceCompare => {
                self.tgrid()?;
            }
            BeaContour => {
                self.sweep_axis()?;
                self.f64("threshold")?;
            }
            PdeTransport => {
                if self.f64("c")? <= 0.0 {
                    bail!("pde-transport needs c > 0");
                }
            }
            SteadyState => {
                self.scheme()?;
            }
        }
        Ok(())
    }
}

/// Per-run bookkeeping, serialized as `manifest.json`.
#[derive(Debug, Default)]
pub struct Manifest {
    pub files: Vec<String>,
    pub convergence: Vec<(String, bool)>,
    pub summary: Value,
}

struct Sink<'a> {
    dir: &'a Path,
    manifest: &'a mut Manifest,
}

impl Sink<'_> {
    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        fs::write(self.dir.join(name), body).with_context(|| format!("writing {name}"))?;
        self.manifest.files.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<()> {
        self.write(name, &(serde_json::to_string_pretty(v)? + "\n"))
    }

    fn flag(&mut self, label: impl Into<String>, ok: bool) {
        self.manifest.convergence.push((label.into(), ok));
    }
}

fn sampled_csv(header: &str, xs: &[f64], cols: &[Vec<f64>]) -> String {
    let mut s = format!("{header}\n");
    for (k, x) in xs.iter().enumerate() {
        s += &format!("{x:.16e}");
        for c in cols {
            s += &format!(",{:.16e}", c[k]);
        }
        s.push('\n');
    }
    s
}

fn period_grid(period: f64, m: usize) -> Vec<f64> {
    (0..m).map(|k| period * k as f64 / m as f64).collect()
}

fn wave_csv(w: &FourierWave, m: usize) -> String {
    let xs = period_grid(w.period(), m);
    let v = w.evaluate_many(&xs);
    sampled_csv("xi,phi", &xs, &[v])
}

fn dispatch(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    use Experiment::*;
    match cfg.experiment {
        McKeanFront => {
            let (c, xs0, span, m) = (cfg.f64("c")?, cfg.f64("xi_star")?, cfg.f64("span")?, cfg.usize("samples")?);
            let xs: Vec<f64> = (0..m).map(|k| xs0 - span + 2.0 * span * k as f64 / (m - 1) as f64).collect();
            let v = xs.iter().map(|x| mckean_front(c, xs0, *x)).collect::<std::result::Result<Vec<_>, _>>()?;
            sink.write("front.csv", &sampled_csv("xi,phi", &xs, &[v]))?;
            sink.manifest.summary = json!({ "width": (1.0 - c * c).sqrt() });
        }
        McKeanPeriodic => {
            let p = cfg.params()?;
            let w = mckean_periodic_wave(cfg.f64("a")?, &p, cfg.usize("n")?)?;
            sink.write("coefficients.csv", &w.wave.to_csv())?;
            sink.write("wave.csv", &wave_csv(&w.wave, cfg.usize("samples")?))?;
            let d = serde_json::to_value(&w.diagnostics)?;
            sink.json("diagnostics.json", &d)?;
            sink.flag("fourier series", !w.diagnostics.divergent);
            sink.manifest.summary = d;
        }
        Sawtooth => {
            let p = cfg.params()?;
            let d = sawtooth_discrete_wave(&p, cfg.usize("n")?)?;
            let exact = sawtooth_periodic_wave(p.c, p.tau)?;
            let xs = period_grid(d.wave.period(), cfg.usize("samples")?);
            let v = d.wave.evaluate_many(&xs);
            let ex: Vec<f64> = xs.iter().map(|x| exact.eval(*x)).collect();
            let sup = v.iter().zip(&ex).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            sink.write("coefficients.csv", &d.wave.to_csv())?;
            sink.write("wave.csv", &sampled_csv("xi,phi,exact", &xs, &[v, ex]))?;
            let info = json!({ "solve": d.info, "exact_xi_star": exact.xi_star, "sup_error_vs_exact": sup });
            sink.json("info.json", &info)?;
            sink.flag("compatibility condition", d.info.compatibility_residual.abs() <= 1e-10);
            sink.manifest.summary = info;
        }
        SmoothNewton => {
            let (nl, p, n) = (cfg.nonlinearity()?, cfg.params()?, cfg.usize("n")?);
            let seed = initial_seed(&nl, p.c, p.period(), n)?;
            let run = smooth_newton_wave(&nl, &p, n, &seed, &cfg.newton()?)?;
            sink.write("coefficients.csv", &run.wave.to_csv())?;
            sink.write("wave.csv", &wave_csv(&run.wave, cfg.usize("samples")?))?;
            let mut rec = serde_json::to_value(&run)?;
            rec["coefficients_file"] = json!("coefficients.csv");
            sink.json("run.json", &rec)?;
            sink.flag("newton", run.converged);
            sink.manifest.summary = json!({ "converged": run.converged, "resonance_r": run.resonance_r });
        }
        Continuation => {
            let nl = cfg.nonlinearity()?;
            let tg = cfg.tgrid()?;
            let steps = continuation_in_t(&nl, cfg.f64("sigma")?, cfg.f64("kappa")?, cfg.f64("c")?, &tg, cfg.usize("n")?, &cfg.newton()?)?;
            let mut recs = Vec::new();
            let mut rcsv = String::from("t,r,converged\n");
            for (k, s) in steps.iter().enumerate() {
                let mut rec = json!({ "t": s.t, "halved": s.halved, "failure": s.failure });
                match &s.run {
                    Some(r) => {
                        let file = format!("coefficients_{k:04}.csv");
                        sink.write(&file, &r.wave.to_csv())?;
                        rec["run"] = serde_json::to_value(r)?;
                        rec["run"]["coefficients_file"] = json!(file);
                        rcsv += &format!("{:.16e},{:.16e},1\n", s.t, r.resonance_r);
                    }
                    None => rcsv += &format!("{:.16e},nan,0\n", s.t),
                }
                sink.flag(format!("T={:.6}", s.t), s.run.is_some());
                recs.push(rec);
            }
            sink.json("continuation.json", &Value::Array(recs))?;
            sink.write("resonance.csv", &rcsv)?;
            let peaks: Vec<Value> = leapwave_core::dtw::resonance_peaks(&steps).into_iter().map(|(t, r)| json!({ "t": t, "r": r })).collect();
            sink.manifest.summary = json!({ "resonance_peaks": peaks });
        }
        BeaLadder => {
            let (nl, p) = (cfg.nonlinearity()?, cfg.params()?);
            let lad = error_ladder(&nl, &p, cfg.usize("n")?, &cfg.newton()?)?;
            sink.write("ladder.csv", &lad.to_csv())?;
            let rec = json!({ "params": lad.params, "n": lad.n, "initial": lad.initial, "newton_residual": lad.newton_residual, "sup_norms": lad.sup_norms });
            sink.json("ladder.json", &rec)?;
            sink.flag("newton", true);
            sink.manifest.summary = rec;
        }
        BeaContour => {
            let nl = cfg.nonlinearity()?;
            let axis = cfg.sweep_axis()?;
            let grid = contour_sweep(&nl, cfg.f64("t")?, cfg.f64("c")?, &axis, &axis, cfg.usize("n")?)?;
            let rep = contour_anomalies(&grid, cfg.f64("threshold")?);
            sink.write("contour.csv", &grid.to_csv())?;
            let failed = grid.values.iter().flatten().filter(|v| !v.is_finite()).count();
            let cells: Vec<Value> = rep
                .anomalies
                .iter()
                .map(|&(i, j)| json!({ "sigma": grid.sigma[i], "kappa": grid.kappa[j], "excess": rep.excess[i][j] }))
                .collect();
            let rec = json!({
                "anomalies": cells,
                "bulk_pairs": rep.bulk_pairs,
                "bulk_smooth_fraction": rep.bulk_smooth_fraction,
                "bulk_max_jump": rep.bulk_max_jump,
                "threshold": rep.threshold,
                "unconverged_cells": failed,
            });
            sink.json("anomalies.json", &rec)?;
            sink.flag("all cells converged", failed == 0);
            sink.manifest.summary = json!({ "anomalies": rep.anomalies.len(), "unconverged_cells": failed });
        }
        ResonanceCompare => {
            let nl = cfg.nonlinearity()?;
            let pairs = resonance_comparison(&nl, cfg.f64("sigma")?, cfg.f64("kappa")?, cfg.f64("c")?, &cfg.tgrid()?, cfg.usize("n")?)?;
            let mut s = String::from("t,r_discrete,r_modified\n");
            for p in &pairs {
                s += &format!("{:.16e},{:.16e},{:.16e}\n", p.t, p.r_discrete, p.r_modified);
            }
            sink.write("resonance_compare.csv", &s)?;
            sink.manifest.summary = json!({ "points": pairs.len() });
        }
        PdeTransport => {
            let (nl, c, t, n) = (cfg.nonlinearity()?, cfg.f64("c")?, cfg.f64("t")?, cfg.usize("n")?);
            // kappa on the collocation spacing and sigma = 2 kappa put the
            // space-time grid on collocation points
            let kappa = t / (2.0 * n as f64);
            let p = WaveParams::new(c, 2.0 * kappa, kappa, 0.5 * t)?;
            let seed = initial_seed(&nl, c, t, n)?;
            let run = smooth_newton_wave(&nl, &p, n, &seed, &NewtonOptions::default())?;
            let rep = wave_transport_test(&nl, &run.wave, &p, cfg.usize("steps")?)?;
            let rec = serde_json::to_value(&rep)?;
            sink.json("transport.json", &rec)?;
            sink.flag("newton", run.converged);
            sink.manifest.summary = rec;
        }
        SteadyState => {
            let (nl, scheme, dx) = (cfg.nonlinearity()?, cfg.scheme()?, cfg.f64("dx")?);
            let saddle = saddle_near_minus_pi(&nl)?;
            let orbits = saddle_orbits(&nl, scheme, dx, saddle.u, cfg.f64("eps")?)?;
            let mut recs = Vec::new();
            for (k, o) in orbits.iter().enumerate() {
                let file = format!("orbit_{k}.csv");
                sink.write(&file, &o.to_csv())?;
                recs.push(json!({
                    "file": file,
                    "classification": o.classification,
                    "start": o.start,
                    "end": o.end,
                    "symmetry_defect": o.symmetry_defect,
                    "samples": o.samples.len(),
                }));
            }
            let rec = json!({ "saddle": saddle, "orbits": recs });
            sink.json("orbits.json", &rec)?;
            sink.manifest.summary = rec;
        }
    }
    Ok(())
}

/// Outcome of [`run_experiment`]: the manifest is on disk either way.
#[derive(Debug)]
pub struct RunOutcome {
    pub manifest_path: PathBuf,
    pub error: Option<String>,
}

/// Runs a validated config, writing artifacts and `manifest.json` into `out`.
/// Solver failures are recorded in the manifest rather than returned; only
/// I/O on the manifest itself is a hard `Err`.
pub fn run_experiment(cfg: &RunConfig, out: &Path, threads: Option<usize>) -> Result<RunOutcome> {
    cfg.validate()?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let start = Instant::now();
    let mut manifest = Manifest::default();
    let result = {
        let mut sink = Sink { dir: out, manifest: &mut manifest };
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(k) = threads {
            b = b.num_threads(k);
        }
        match b.build() {
            Ok(pool) => pool.install(|| dispatch(cfg, &mut sink)),
            Err(e) => Err(anyhow!("thread pool: {e}")),
        }
    };
    let error = result.err().map(|e| format!("{e:#}"));
    let doc = json!({
        "experiment": cfg.experiment.name(),
        "config": cfg.values,
        "versions": { "leapwave": env!("CARGO_PKG_VERSION") },
        "threads": threads,
        "wall_time_s": start.elapsed().as_secs_f64(),
        "status": if error.is_some() { "error" } else { "ok" },
        "error": error,
        "convergence": manifest.convergence.iter().map(|(l, ok)| json!({ "label": l, "converged": ok })).collect::<Vec<_>>(),
        "files": manifest.files,
        "summary": manifest.summary,
    });
    let path = out.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n").context("writing manifest.json")?;
    Ok(RunOutcome { manifest_path: path, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn names_round_trip() {
        for e in EXPERIMENTS {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("nope".parse::<Experiment>().is_err());
    }

    #[test]
    fn defaults_validate() {
        for e in EXPERIMENTS {
            RunConfig::resolve(e, &[], &[]).unwrap_or_else(|err| panic!("{}: {err}", e.name()));
        }
    }

    #[test]
    fn every_key_is_documented() {
        for e in EXPERIMENTS {
            for (k, _) in e.defaults() {
                assert!(KEY_DOCS.iter().any(|d| d.0 == k), "{k}");
            }
        }
    }

    #[test]
    fn overrides_win_over_file() {
        let cfg = RunConfig::resolve(Experiment::SmoothNewton, &kv(&[("n", "32")]), &kv(&[("n", "48")])).unwrap();
        assert_eq!(cfg.usize("n").unwrap(), 48);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::resolve(Experiment::SmoothNewton, &[], &kv(&[("c", "1")])).is_err());
        assert!(RunConfig::resolve(Experiment::SmoothNewton, &[], &kv(&[("sigma", "-1")])).is_err());
        assert!(RunConfig::resolve(Experiment::SmoothNewton, &[], &kv(&[("bogus", "1")])).is_err());
        assert!(RunConfig::resolve(Experiment::McKeanFront, &[], &kv(&[("c", "1.2")])).is_err());
        assert!(RunConfig::resolve(Experiment::McKeanPeriodic, &[], &kv(&[("a", "1.5")])).is_err());
        assert!(RunConfig::resolve(Experiment::Continuation, &[], &kv(&[("t_start", "3")])).is_err());
        assert!(RunConfig::resolve(Experiment::SteadyState, &[], &kv(&[("scheme", "euler")])).is_err());
        assert!(RunConfig::resolve(Experiment::SmoothNewton, &[], &kv(&[("n", "0")])).is_err());
    }

    #[test]
    fn kv_parsing() {
        let p = parse_kv("# comment\n c = 0.5 \n\nn=64 # trailing\n").unwrap();
        assert_eq!(p, kv(&[("c", "0.5"), ("n", "64")]));
        assert!(parse_kv("oops").is_err());
    }

    #[test]
    fn tgrid_includes_end() {
        let cfg = RunConfig::resolve(Experiment::Continuation, &[], &[]).unwrap();
        let g = cfg.tgrid().unwrap();
        assert_eq!(g.len(), 61);
        assert!((g[60] - (2.0 * PI + 1.2)).abs() < 1e-12);
    }

    #[test]
    fn sweep_axis_is_interior() {
        let cfg = RunConfig::resolve(Experiment::BeaContour, &[], &[]).unwrap();
        let a = cfg.sweep_axis().unwrap();
        assert_eq!(a.len(), 40);
        assert!((a[0] - (0.2 + 1.0 / 41.0)).abs() < 1e-15 && a[39] < 1.2);
    }
}
