//! Solvers for the discrete travelling-wave equation
//! `(c^2/k^2) D_k phi - (1/s^2) D_s phi = -V'(phi)`, with `D_h` the
//! centred second difference of step `h`.

pub mod continuation;
pub mod mckean;
pub mod newton;
pub mod resonance;
pub mod sawtooth;
pub mod spectrum;

pub use continuation::{continuation_in_t, resonance_peaks, ContinuationStep};
pub use mckean::{mckean_lattice_wave, mckean_periodic_wave, mckean_scan, McKeanWave};
pub use newton::{map_equivalence_error, smooth_newton_wave, NewtonOptions, NewtonRun};
pub use resonance::{resonance_measure, resonance_measure_centred, window_spread};
pub use sawtooth::sawtooth_discrete_wave;
pub use spectrum::{denominator, rdisc_zeros_sigma_eq_2kappa, rdisc_zeros_sigma_eq_kappa, CharacteristicFunction, DenominatorSpectrum};

use crate::error::Result;
use crate::nonlin::Nonlinearity;
use crate::spectral::{FourierWave, WaveParams};

/// Pointwise residual of the travelling-wave equation for a Fourier wave.
pub fn dtwe_residual(nl: &Nonlinearity, params: &WaveParams, w: &FourierWave, xs: &[f64]) -> Result<Vec<f64>> {
    let (c, s, k) = (params.c, params.sigma, params.kappa);
    xs.iter()
        .map(|&x| {
            let p0 = w.eval(x);
            let dk = w.eval(x + k) - 2.0 * p0 + w.eval(x - k);
            let ds = w.eval(x + s) - 2.0 * p0 + w.eval(x - s);
            Ok(c * c / (k * k) * dk - ds / (s * s) + nl.vprime(p0)?)
        })
        .collect()
}
