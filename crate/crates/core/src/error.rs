use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin magnitude must be at least 1/2 (got 2s = {0})")]
    InvalidSpin(u32),

    #[error("{name} must be finite and non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },

    #[error("temperature must be finite and positive, got {0}")]
    InvalidTemperature(f64),

    #[error("invalid cycle parameters: {0}")]
    InvalidCycle(String),

    #[error("thermal states were built on different spectra")]
    SpectrumMismatch,

    #[error("the J_a bound applies only to y < 0 with x > 0 (got x = {x}, 2y = {two_y})")]
    NoCouplingBound { x: i32, two_y: i32 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("no complete Otto cycle runs as an engine")]
    NoEngineCycle,

    #[error("sweep must contain at least one point")]
    EmptySweep,
}
