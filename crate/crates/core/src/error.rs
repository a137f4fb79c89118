use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
    #[error("{0} is not a smooth nonlinearity")]
    NotSmooth(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("small denominator |1 + d_n| = {value:e} at n = {index}")]
    Resonant { index: i64, value: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("root not bracketed: {0}")]
    NoBracket(String),
    #[error("singular linear system")]
    Singular,
    #[error("unexpected root structure: {0}")]
    RootStructure(String),
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("wave is not Hermitian: imaginary part {0:e}")]
    Symmetry(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
