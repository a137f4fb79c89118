//! Travelling waves of the 5-point leapfrog discretization of
//! `u_tt - u_xx = -V'(u)`, with exact case-study solvers, a pseudospectral
//! Newton solver and a backward error analysis engine.

pub mod bea;
pub mod dtw;
pub mod error;
pub mod exact;
pub mod nonlin;
pub mod ode;
pub mod pdesim;
pub mod roots;
pub mod spectral;

pub use error::{Error, Result};
pub use nonlin::{Nonlinearity, SmoothPotential};
pub use spectral::{FourierWave, WaveParams};
