//! Acceptance criteria 1-10. Runs as a plain binary (no libtest harness) so
//! every criterion reports, even after an earlier one fails.

use std::f64::consts::PI;
use std::time::Instant;

use leapwave_core::bea::hamiltonian::ModifiedHamiltonianSystem;
use leapwave_core::bea::studies::{fit_slope, windowed_second_difference_spread, worst_window_ratio};
use leapwave_core::bea::{contour_anomalies, contour_sweep, error_ladder, ModifiedEquation, Order};
use leapwave_core::dtw::continuation::initial_seed;
use leapwave_core::dtw::mckean::plateau_wiggle;
use leapwave_core::dtw::newton::quadratic_ratios;
use leapwave_core::dtw::{
    continuation_in_t, map_equivalence_error, mckean_periodic_wave, mckean_scan, resonance_peaks, sawtooth_discrete_wave,
    smooth_newton_wave, NewtonOptions,
};
use leapwave_core::exact::{pendulum_periodic_wave, sawtooth_periodic_wave};
use leapwave_core::pdesim::steady::{continuous_separatrices, saddle_near_minus_pi, saddle_orbits, OrbitClass, SpatialScheme};
use leapwave_core::pdesim::{leapfrog_step, msc_residual, tangent_step, GridField};
use leapwave_core::{Nonlinearity, WaveParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

// pinned tolerances
const AC1_THRESHOLD: f64 = 1e-2;
const AC1_SCAN_MAX: u64 = 20_000_000;
const AC2_SLOPE: f64 = 2.0;
const AC2_TOL: f64 = 0.3;
const AC3_SUP: f64 = 5e-2;
const AC3_WINDOW_RATIO: f64 = 3.0;
const AC4_RATIO_BOUND: f64 = 1e3;
const AC4_MAP_TOL: f64 = 1e-8;
const AC5_PEAK: f64 = 7.2632;
const AC5_TOL: f64 = 0.05;
const AC6_SLOPES: [f64; 3] = [2.0, 4.0, 6.0];
const AC6_TOL: f64 = 0.3;
const AC7_JUMP: f64 = 0.5;
const AC7_RADIUS: f64 = 0.1;
const AC7_BULK_FRACTION: f64 = 0.95;
const AC8_SLOPE: f64 = 5.5;
const AC10_REL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn sci(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", "))
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ac1() -> Outcome {
    let rat = WaveParams::new(0.5, 0.4, 0.2, 30.0).unwrap();
    let irr = WaveParams::new(0.5, 0.4, 0.2, 5.0 * 2f64.sqrt()).unwrap();
    let trailing = |p: &WaveParams| -> Vec<f64> {
        (16..=19).map(|e| mckean_periodic_wave(0.5, p, 1 << e).unwrap().diagnostics.trailing_max).collect()
    };
    let tr = trailing(&rat);
    let ti = trailing(&irr);
    let decreasing = tr.windows(2).all(|w| w[1] < w[0]);
    let scan = mckean_scan(&irr, 1, AC1_SCAN_MAX, AC1_THRESHOLD);
    let stalls = ti[3] >= ti[0];
    outcome(
        decreasing && scan.count_above > 0 && stalls,
        format!(
            "rational trailing {:.3e} -> {:.3e} (decreasing: {decreasing}); irrational: {} indices >= 1e-2 up to 2e7 (first {:?}, largest {:.3e} at {}), trailing {:.3e} -> {:.3e}",
            tr[0], tr[3], scan.count_above, scan.first_above, scan.largest, scan.largest_index, ti[0], ti[3]
        ),
    )
}

fn ac2() -> Outcome {
    let kappas = [0.4, 0.2, 0.1, 0.05];
    let tau = 30.0;
    let amps: Vec<f64> = kappas
        .iter()
        .map(|&k| {
            let p = WaveParams::new(0.5, 2.0 * k, k, tau).unwrap();
            let w = mckean_periodic_wave(0.5, &p, 1 << 18).unwrap();
            plateau_wiggle(&w.wave, k, 0.4 * tau, 0.6 * tau)
        })
        .collect();
    let slope = fit_slope(&kappas, &amps);
    outcome((slope - AC2_SLOPE).abs() <= AC2_TOL, format!("amplitudes {}, slope {slope:.3} (want 2 +- 0.3)", sci(&amps)))
}

fn ac3() -> Outcome {
    let tau = 10.0;
    let p = WaveParams::new(0.5, 0.4, 0.4 / 2f64.sqrt(), tau).unwrap();
    let exact = sawtooth_periodic_wave(0.5, tau).unwrap();
    let xs: Vec<f64> = (0..4000).map(|k| 2.0 * tau * k as f64 / 4000.0).collect();
    let mut errs = Vec::new();
    let mut last = None;
    for e in 7..=10 {
        let d = sawtooth_discrete_wave(&p, 1 << e).unwrap();
        let v = d.wave.evaluate_many(&xs);
        errs.push(xs.iter().zip(&v).map(|(x, y)| (exact.eval(*x) - y).abs()).fold(0.0, f64::max));
        last = Some(d.wave);
    }
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    let w = last.unwrap();
    let dense: Vec<f64> = (0..=4096).map(|k| 2.0 * tau * k as f64 / 4096.0).collect();
    let ratio = worst_window_ratio(&windowed_second_difference_spread(&w.evaluate_many(&dense), 16));
    let sup = *errs.last().unwrap();
    outcome(
        sup <= AC3_SUP && monotone && ratio <= AC3_WINDOW_RATIO,
        format!("sup errors N=2^7..2^10 {} (monotone: {monotone}), worst window ratio {ratio:.2}", sci(&errs)),
    )
}

fn ac4() -> Outcome {
    let nl = Nonlinearity::Sine;
    let t = 15.0832;
    let p = WaveParams::new(1.3, 1.0, 0.5f64.sqrt(), 0.5 * t).unwrap();
    let n = 256;
    let seed = initial_seed(&nl, 1.3, t, n).unwrap();
    let run = smooth_newton_wave(&nl, &p, n, &seed, &NewtonOptions { tol: 1e-12, max_iter: 40 });
    let (ok_a, da) = match run {
        Ok(r) => {
            let ratios = quadratic_ratios(&r.residual_history, f64::INFINITY);
            let tail: Vec<f64> = ratios.iter().rev().take(3).rev().cloned().collect();
            let ok = tail.len() == 3 && tail.iter().all(|q| q.is_finite() && *q <= AC4_RATIO_BOUND);
            (ok, format!("residuals {}, last ratios {}", sci(&r.residual_history), sci(&tail)))
        }
        Err(e) => (false, format!("Newton failed: {e}")),
    };
    let pb = WaveParams::new(1.3, 0.8, 0.8, PI).unwrap();
    // 64 modes leave a 7e-8 tail, which caps the map gap near 4e-7
    let (pseed, _) = pendulum_periodic_wave(&nl, 1.3, 2.0 * PI, 128).unwrap();
    let rb = smooth_newton_wave(&nl, &pb, 128, &pseed, &NewtonOptions { tol: 1e-13, max_iter: 25 }).unwrap();
    let steps = (2.0 * PI / 0.8).ceil() as usize + 1;
    let err = map_equivalence_error(&nl, &pb, &rb.wave, 0.0, steps).unwrap();
    outcome(ok_a && err <= AC4_MAP_TOL, format!("(a) {da}; (b) map gap {err:.2e}"))
}

fn ac5() -> Outcome {
    let tg: Vec<f64> = (0..=60).map(|k| 2.0 * PI + 0.02 * k as f64).collect();
    let steps = continuation_in_t(&Nonlinearity::Sine, 1.0, 0.5f64.sqrt(), 1.3, &tg, 128, &NewtonOptions::default()).unwrap();
    let failed = steps.iter().filter(|s| s.run.is_none()).count();
    let peaks = resonance_peaks(&steps);
    let hit = peaks.iter().find(|(t, _)| (t - AC5_PEAK).abs() <= AC5_TOL);
    outcome(hit.is_some(), format!("peaks {:?}, {failed} failed steps", peaks.iter().map(|(t, r)| format!("T={t:.4} R={r:.2}")).collect::<Vec<_>>()))
}

fn ac6() -> Outcome {
    let hs = [0.4, 0.2, 0.1, 0.05];
    let opts = NewtonOptions { tol: 1e-13, max_iter: 30 };
    let mut norms = [[0.0; 4]; 3];
    let mut note = String::new();
    for (k, h) in hs.iter().enumerate() {
        let p = WaveParams::new(1.3, *h, *h, PI).unwrap();
        let lad = match error_ladder(&Nonlinearity::Sine, &p, 64, &opts) {
            Ok(l) => l,
            Err(e) => {
                note += &format!(" h={h}: tol 1e-13 failed ({e}), default tol used;");
                error_ladder(&Nonlinearity::Sine, &p, 64, &NewtonOptions::default()).unwrap()
            }
        };
        for o in 0..3 {
            norms[o][k] = lad.sup_norms[o];
        }
    }
    let slopes: Vec<f64> = norms.iter().map(|e| fit_slope(&hs, e)).collect();
    let pass = slopes.iter().zip(AC6_SLOPES).all(|(s, t)| (s - t).abs() <= AC6_TOL);
    outcome(pass, format!("slopes {slopes:.3?} (want 2, 4, 6 +- 0.3);{note} norms {}", norms.iter().map(|e| sci(e)).collect::<Vec<_>>().join(" ")))
}

fn ac7() -> Outcome {
    let axis: Vec<f64> = (1..=40).map(|k| 0.2 + k as f64 / 41.0).collect();
    let grid = contour_sweep(&Nonlinearity::Sine, 2.0 * PI, 1.3, &axis, &axis, 64).unwrap();
    let rep = contour_anomalies(&grid, AC7_JUMP);
    let a = rep.max_excess_near(&grid, 0.8, 0.6, AC7_RADIUS);
    let b = rep.max_excess_near(&grid, 1.0, 0.8, AC7_RADIUS);
    let hit = |m: Option<(f64, f64, f64)>| m.is_some_and(|v| v.0 >= AC7_JUMP);
    let cells = axis.len() * axis.len();
    let isolated = rep.anomalies.len() * 20 <= cells;
    let pass = rep.bulk_smooth_fraction >= AC7_BULK_FRACTION && isolated && hit(a) && hit(b);
    outcome(
        pass,
        format!(
            "bulk smooth fraction {:.3}, {} anomalies and {} unconverged cells of {cells}; best excess near (0.8,0.6) {:?}, near (1.0,0.8) {:?}",
            rep.bulk_smooth_fraction,
            rep.anomalies.len(),
            grid.values.iter().flatten().filter(|v| !v.is_finite()).count(),
            a.map(|v| format!("{:.3} at ({:.3},{:.3})", v.0, v.1, v.2)),
            b.map(|v| format!("{:.3} at ({:.3},{:.3})", v.0, v.1, v.2)),
        ),
    )
}

fn ac8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let hs = [0.2, 0.1, 0.05];
    let mut worst = f64::INFINITY;
    for _ in 0..20 {
        let (y, p) = (rng.random_range(-2.5..2.5), rng.random_range(-1.0..1.0));
        let m: Vec<f64> = hs
            .iter()
            .map(|h| {
                let me = ModifiedEquation::new(&Nonlinearity::Sine, 1.3, *h, *h, Order::O6).unwrap();
                ModifiedHamiltonianSystem::new(&me).field_mismatch(y, p).unwrap()
            })
            .collect();
        worst = worst.min(fit_slope(&hs, &m));
    }
    outcome(worst >= AC8_SLOPE, format!("smallest slope over 20 random states {worst:.3}"))
}

fn ac9() -> Outcome {
    let nl = Nonlinearity::AppendixForce;
    let s = saddle_near_minus_pi(&nl).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for dx in [0.1, 0.2, 0.4] {
        let cls: Vec<OrbitClass> = saddle_orbits(&nl, SpatialScheme::LobattoIIIA3, dx, s.u, 1e-8).unwrap().iter().map(|o| o.classification).collect();
        pass &= cls.contains(&OrbitClass::Homoclinic) && !cls.contains(&OrbitClass::Heteroclinic);
        detail += &format!("dx={dx}: {cls:?}; ");
    }
    let exact: Vec<OrbitClass> = continuous_separatrices(&nl, s.u, 1e-8, 0.05).unwrap().iter().map(|o| o.classification).collect();
    pass &= !exact.is_empty() && exact.iter().all(|c| *c == OrbitClass::Heteroclinic);
    outcome(pass, format!("{detail}exact flow: {exact:?}"))
}

fn msc_run(eps: f64, rng: &mut StdRng) -> f64 {
    let nl = Nonlinearity::Sine;
    let m = 32;
    let (dx, dt) = (0.25, 0.1);
    let rv = |rng: &mut StdRng, a: f64| (0..m).map(|_| rng.random_range(-a..a)).collect::<Vec<f64>>();
    let base = rv(rng, 1.0);
    let drift: Vec<f64> = rv(rng, 0.05);
    let mut f = GridField::new(dx, dt, base.clone(), base.iter().zip(&drift).map(|(u, d)| u + d).collect()).unwrap();
    let mut a = GridField::new(dx, dt, rv(rng, 1.0), rv(rng, 1.0)).unwrap();
    let mut b = GridField::new(dx, dt, rv(rng, 1.0), rv(rng, 1.0)).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let a1 = tangent_step(&nl, &f, &a, eps).unwrap();
        let b1 = tangent_step(&nl, &f, &b, eps).unwrap();
        let res = msc_residual(&f, (&a, &a1), (&b, &b1)).unwrap();
        let scale = a.curr.iter().chain(&b.curr).fold(0.0f64, |s, v| s.max(v.abs()));
        worst = worst.max(res.iter().fold(0.0f64, |s, v| s.max(v.abs())) / (scale * scale));
        f = leapfrog_step(&nl, &f).unwrap();
        a = a1;
        b = b1;
    }
    worst
}

fn ac10() -> Outcome {
    let mut exact_worst = 0.0f64;
    let mut ratios = Vec::new();
    for seed in 0..5u64 {
        exact_worst = exact_worst.max(msc_run(0.0, &mut StdRng::seed_from_u64(seed)));
        let r1 = msc_run(1e-3, &mut StdRng::seed_from_u64(seed));
        let r2 = msc_run(2e-3, &mut StdRng::seed_from_u64(seed));
        ratios.push(r2 / r1);
    }
    let linear = ratios.iter().all(|q| (q - 2.0).abs() <= 0.2);
    outcome(exact_worst <= AC10_REL && linear, format!("symplectic residual {exact_worst:.2e}, eps-doubling ratios {ratios:.3?}"))
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    // libtest-style flags are ignored; a bare word filters criteria by name
    let filter = args.iter().skip(1).find(|a| !a.starts_with('-')).cloned();
    let all: [(&str, fn() -> Outcome); 10] = [
        ("ac1_mckean_dichotomy", ac1),
        ("ac2_mckean_wiggle_scaling", ac2),
        ("ac3_sawtooth_match", ac3),
        ("ac4_newton", ac4),
        ("ac5_resonance_peak", ac5),
        ("ac6_bea_order_ladder", ac6),
        ("ac7_bea_contour_anomalies", ac7),
        ("ac8_modified_hamiltonian", ac8),
        ("ac9_steady_state_dichotomy", ac9),
        ("ac10_multisymplectic_residual", ac10),
    ];
    let mut failed = Vec::new();
    for (name, f) in all {
        if filter.as_ref().is_some_and(|p| !name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {name} [{:.1}s] {}", start.elapsed().as_secs_f64(), o.detail);
        if !o.pass {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: {} failing: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
